#pragma once

#include <cstdint>
#include <map>

#include "dg/dyadic.hpp"

namespace dg {

using CoordKey = std::uint64_t;

/**
 * Sparse coordinate vector over an abstract index set. Entries are complex;
 * the expansion routines below require real entries and the complex case is
 * handled upstream via the real/imaginary split.
 */
class CoordVector {
  public:
    CoordVector() = default;

    void set(CoordKey k, Complex v);
    Complex at(CoordKey k) const;
    const std::map<CoordKey, Complex>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /** Support size nu(x). */
    std::size_t nu() const { return entries_.size(); }

    double norm1() const;
    double norm2() const;
    double norm_p(double p) const;  // p in [1, inf]; inf gives the sup norm
    double norm_inf() const;

    bool is_real() const;
    CoordVector real_part() const;
    CoordVector imag_part() const;
    CoordVector conj() const;
    CoordVector scaled(Complex factor) const;

    friend CoordVector operator-(const CoordVector& a, const CoordVector& b);

  private:
    std::map<CoordKey, Complex> entries_;
};

/** Bilinear-with-conjugation dot product sum x(a) conj(y(a)). */
Complex dot_conj(const CoordVector& x, const CoordVector& y);
/** Plain bilinear sum x(a) y(a), no conjugation. */
Complex dot_plain(const CoordVector& x, const CoordVector& y);

namespace riesz {

/** Coordinate -> generator assignment used when expanding a vector. */
using GenMap = std::map<CoordKey, GeneratorId>;

/** Unbounded expansion order. */
constexpr int kUnbounded = -1;

/**
 * Imaginary part of the Riesz product with base ix: the odd-order series
 * whose coefficient on the order-(2k+1) character {a_1..a_{2k+1}} is
 * (-1)^k x(a_1)...x(a_{2k+1}). Orders above order_cap contribute their
 * certified l2 tail bound sqrt(sum_{odd k > cap} |x|_2^{2k} / k!) to the
 * dropped ledger, coefficients below prune_eps are dropped exactly.
 */
WalshSeries q_series(const CoordVector& x, const GenMap& gens, int order_cap = kUnbounded,
                     double prune_eps = 0.0, std::uint64_t session = 0);

/**
 * The odd-order measure difference series: coefficient (1/4^k) x(a_1)...
 * x(a_{2k+1}) on order 2k+1. Requires |x|_inf <= 1; its total variation
 * is at most p_total_variation_bound().
 */
WalshSeries p_series(const CoordVector& x, const GenMap& gens, int order_cap = kUnbounded,
                     double prune_eps = 0.0, std::uint64_t session = 0);

/**
 * The real-base Riesz product: coefficient prod_{a in F'} x(a) on every
 * finite subset F' of the support, identity coefficient 1. For
 * |x|_inf <= 1 this is the density pattern of a probability measure.
 */
WalshSeries riesz_product_series(const CoordVector& x, const GenMap& gens,
                                 double prune_eps = 0.0, std::uint64_t session = 0);

/** Certified l2 mass bound of the orders >= 3 of q_series: sqrt(sinh |x|^2 - |x|^2). */
double q_tail_l2(const CoordVector& x);

/** Uniform-norm bound e^{|x|_2^2 / 2} for the q series. */
double q_sup_bound(const CoordVector& x);

/** Spectral l1 bound sinh(|x|_1) for the q series. */
double q_l1_spectral_bound(const CoordVector& x);

/**
 * L2 modulus-of-continuity certificate: sqrt(2 cosh(2 rho^2)) |x - y|_2
 * with rho = max(|x|_2, |y|_2) dominates |Q(x) - Q(y)|_{L2}.
 */
double lipschitz_bound(const CoordVector& x, const CoordVector& y);

/** Total variation of the p_series measure is at most 2. */
constexpr double p_total_variation_bound() { return 2.0; }

}  // namespace riesz
}  // namespace dg
