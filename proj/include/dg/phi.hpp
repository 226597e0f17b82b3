#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dg/riesz.hpp"

namespace dg::phi {

enum class Scheme { phi, phi2, phi_k, phi_p };
enum class Mode { exact, truncated };

struct PhiConfig {
    int levels = 10;          // recursion depth J
    int order_cap = 9;        // odd expansion order cap per level
    double prune_eps = 1e-14;
    double t = 1.0;           // normalization parameter of the t-schemes
    int phase_k = 2;          // k of the k-fold scheme
    Mode mode = Mode::exact;
    int bit_cap = 20;         // exact-mode per-level support / enumeration cap

    static PhiConfig truncated() {
        PhiConfig c;
        c.mode = Mode::truncated;
        c.prune_eps = 1e-10;
        return c;
    }
};

/**
 * Certified error state of one built series.
 *
 * telescope_remainder bounds, in the scheme's own norm, the level vector
 * that would feed level J+1; spectrally pairing two series multiplies
 * their telescope remainders. It is exactly 0 when the recursion reached
 * the zero vector without any pruning. prune_remainder bounds the L2
 * distance between the built series and the exact recursion's series.
 */
struct ErrorCertificate {
    double telescope_remainder = 0.0;
    double prune_remainder = 0.0;
    bool exact = true;
};

struct PhiLevel {
    int level = 1;
    WalshSeries contribution;        // fully scaled level term; the series is their sum
    Complex level_scale{1.0, 0.0};   // nominal scale of the real recursion at this level
    double x_norm = 0.0;             // l2 norm of the level vector (real part)
    double x_norm_imag = 0.0;        // l2 norm of the imaginary-part level vector
};

/**
 * A leveled Walsh series produced by one of the recursive schemes. Level j
 * has spectrum inside block j of the session, so levels are orthogonal and
 * the assembled series pairs blockwise.
 */
struct PhiSeries {
    Scheme scheme = Scheme::phi;
    double p = 2.0;  // lp exponent when scheme == phi_p
    std::uint64_t session = 0;
    std::vector<PhiLevel> levels;
    ErrorCertificate certificate;

    WalshSeries assembled() const;
    double l2_norm() const;
};

struct Constants {
    double delta;      // sqrt(sinh 1 - 1)
    double c;          // positive root of 2 - c^2 sinh(1/c^2)
    double K1;         // sqrt(e) / (1 - delta)
    double K_complex;  // 2 K1
};

/** The scheme constants, computed once to ~1e-12. */
const Constants& constants();

/** Spectral tail rate sqrt(sinh(1/t^2) - 1/t^2); requires t > 0. */
double delta_t(double t);
/** Uniform-norm constant of the t-scheme, defined for t > c. */
double K_of_t(double t);
/** Summand-wise pairing constant of the t-scheme, defined for t > c. */
double L_of_t(double t);

/** Golden-section minimum of K over (c, 10): returns (t_min, K_min). */
std::pair<double, double> minimize_K();
/** Golden-section minimum of L over (c, 10): returns (t_min, L_min). */
std::pair<double, double> minimize_L();

/**
 * The unit-ball scheme: levels (i delta)^{j-1} Q(x^{(j)} / delta^{j-1}),
 * with the level vectors produced by re-indexing the order >= 3 spectrum
 * through the session's tau maps. Complex input splits into real and
 * imaginary builds inside the same session. Requires |x|_2 <= 1 (+1e-12,
 * renormalized inside tolerance).
 */
PhiSeries build_phi(const CoordVector& x, Session& session, const PhiConfig& cfg = {});

/**
 * The whole-space t-scheme: levels i^{j-1} t |x^{(j)}|_2 Q(sigma_t x^{(j)}).
 * Defined on all of l2; requires t > c. Homogeneous for t = 1.
 */
PhiSeries build_phi2(const CoordVector& x, double t, Session& session,
                     const PhiConfig& cfg = {});

/**
 * The k-fold scheme: t = 1 with level phase e^{i pi / k}. k = 2 is exactly
 * build_phi2(x, 1).
 */
PhiSeries build_phi_k(const CoordVector& x, int k, Session& session,
                      const PhiConfig& cfg = {});

/**
 * The lp scheme on the unit ball of lp: p = 1 is the linear series, p in
 * (1, 2] runs the Q recursion with factor delta^{2/p}, p in (2, inf) the
 * measure-difference recursion with the same factor, p = inf the
 * measure-difference recursion with factor 1/4. Use infinity() for p = inf.
 */
PhiSeries build_phi_p(const CoordVector& x, double p, Session& session,
                      const PhiConfig& cfg = {});

struct PairResult {
    Complex value{0.0, 0.0};
    double budget = 0.0;
    ErrorCertificate certificate;
};

/**
 * Certified spectral representation of sum x(a) conj(y(a)): builds the
 * scheme series of x and of conj(y) in one session and pairs them. For
 * scheme phi_p, x is tested against p and y against the conjugate
 * exponent. The budget is (t delta_t)^{2J} |x|_2 |y|_2 for the t-schemes
 * (0 when either recursion terminates exactly) plus the certified
 * pruning perturbation.
 */
PairResult pair_dot(const CoordVector& x, const CoordVector& y, Scheme scheme, Session& session,
                    const PhiConfig& cfg = {}, double p = 2.0);

/** Uniform-norm bounds of the assembled series. */
SupBounds sup_certificate(const PhiSeries& series, int bit_cap = 20);

}  // namespace dg::phi
