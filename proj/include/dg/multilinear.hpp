#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dg/phi.hpp"

namespace dg::multilinear {

/**
 * A covering sequence over [m], 1-based: non-empty subsets S_1..S_n whose
 * union is [m]. Parsed from and printed to the compact form "1,2;2,3;1,3".
 */
struct CoveringSequence {
    int m = 0;
    std::vector<std::vector<int>> sets;  // each sorted ascending, elements in [1, m]

    static CoveringSequence parse(const std::string& text);
    std::string to_string() const;

    /** Per-coordinate incidence k_j = |{i : j in S_i}|, index 0 = coordinate 1. */
    std::vector<int> incidence() const;
    /** Minimum incidence I_U. */
    int min_incidence() const;
    /** beta_U = sum of incidences = sum of |S_i|. */
    int beta() const;
};

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
};

/**
 * The packing value alpha(U): max sum v_j subject to sum_{j in S} v_j <= 1
 * for every S in U and v >= 0, solved by an exact rational simplex.
 * Caps m, n at 12.
 */
Rational alpha_lp(const CoveringSequence& u);

/**
 * Standard form: replace S_j by S_k whenever S_j is a proper subset of S_k,
 * merge coordinates with identical membership patterns, relabel to the
 * class representatives. Preserves alpha and never decreases the minimum
 * incidence.
 */
CoveringSequence standard_form(const CoveringSequence& u);

/** Dense kernel over A^m; index packs the tuple with coordinate 1 most significant. */
struct Theta {
    int m = 0;
    int alphabet = 0;
    std::vector<Complex> values;  // size alphabet^m

    static Theta constant(int m, int alphabet, Complex value);
    Complex at(const std::vector<int>& tuple) const;
};

/** Packs a tuple of digits in [0, alphabet) to a flat row-major index. */
std::uint64_t pack_index(const std::vector<int>& tuple, int alphabet);

/**
 * Direct absolutely-convergent evaluation of the n-linear functional
 * sum_{a in A^m} theta(a) prod_i x_i(pi_{S_i}(a)). Argument i is indexed by
 * packed tuples over the coordinates of S_i in ascending order.
 */
Complex eta_bruteforce(const CoveringSequence& u, const Theta& theta,
                       const std::vector<CoordVector>& args,
                       std::uint64_t work_cap = std::uint64_t{1} << 24);

/**
 * A dense table of values over per-slot sign assignments: the finite
 * realization of an iterated map applied to a vector over A^l. Slot s
 * was built in its own session; bit b of slot s flips the sign of
 * slots[s].gens[b]. Slot 1 owns the lowest bits of the linear index.
 */
struct SlotTable {
    struct Slot {
        std::uint64_t session = 0;
        std::vector<GeneratorId> gens;
    };
    std::vector<Slot> slots;
    std::vector<Complex> values;
    bool exact = true;
    double sup_bound = 0.0;  // certified K^l |x|_2

    std::size_t total_bits() const;
    double sup() const;
};

/**
 * Builds the iterated-map table of x over A^l: stage s applies the
 * k_tuple[s-1]-fold scheme across coordinate s of the remaining slices,
 * inside sessions[s-1]. All arguments of one multilinear verification must
 * share the session assigned to each covered coordinate. l <= 3.
 */
SlotTable build_phi_tuple(const CoordVector& x, int alphabet, const std::vector<int>& k_tuple,
                          const std::vector<Session*>& sessions,
                          const phi::PhiConfig& cfg = {});

/**
 * The fractional convolution of the tables along U: for each coordinate j,
 * integrates k_j - 1 free copies of the slot-j variable with the last
 * occurrence evaluated at the product of the others, by direct summation
 * over sign assignments. Tables must agree on the session of every shared
 * coordinate.
 */
Complex frac_convolution(const CoveringSequence& u, const std::vector<SlotTable>& tables,
                         int bit_cap = 26);

struct KfoldResult {
    Complex value{0.0, 0.0};
    double budget = 0.0;
};

/**
 * Spectral k-fold pairing sum_g prod_i F_k(x_i)^(g) over a shared session;
 * certifies |value - sum_a prod_i x_i(a)| <= budget.
 */
KfoldResult phi_k_parseval(const std::vector<CoordVector>& xs, int k, Session& session,
                           const phi::PhiConfig& cfg = {});

/** An explicit finite point set inside E_1 x ... x E_d. */
struct PointSet {
    int d = 0;
    std::vector<int> universe;             // |E_i| per axis; values are 0-based
    std::vector<std::vector<int>> points;  // each of length d
};

/** The three-axis point set {((a,b),(b,c),(a,c))} over an alphabet of size k. */
PointSet three_halves_product(int k);

enum class PsiMode { exhaustive, witness };

/**
 * Combinatorial gauge: max |F cut down to s-subsets per axis|. Exhaustive
 * mode enumerates all subset choices under a work cap; witness mode returns
 * the greedy lower bound from the s most popular values per axis.
 */
std::int64_t psi_gauge(const PointSet& f, int s, PsiMode mode = PsiMode::exhaustive,
                       std::uint64_t work_cap = std::uint64_t{1} << 27);

struct KszResult {
    double sup_estimate = 0.0;  // sampled lower estimate of the sup
    double l1_upper = 0.0;      // trivial upper bound N^3
    double vnorm_lower = 0.0;   // N^3 / sup_estimate: heuristic over-estimate
};

/**
 * Random-sign trilinear sup experiment: draws epsilon_{ijk} = +-1 over
 * [N]^3, samples the trilinear form on random sign matrices with the third
 * factor maximized exactly, and reports the best trial. The sup estimate
 * is a lower estimate, so vnorm_lower over-estimates the certified bound;
 * the run is illustrative, not a certificate. N <= 12.
 */
KszResult ksz_demo(int n, int trials, int samples, std::uint64_t seed, bool all_ones = false);

}  // namespace dg::multilinear
