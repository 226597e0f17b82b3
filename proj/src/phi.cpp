#include "dg/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dg::phi {

namespace {

constexpr double kNormTol = 1e-12;

double sinh1() { return std::sinh(1.0); }

double solve_endpoint() {
    // 2 - c^2 sinh(1/c^2) = 0; the left side increases from -inf to ~1 on (0, inf)
    double lo = 0.1, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double v = 2.0 - mid * mid * std::sinh(1.0 / (mid * mid));
        (v < 0.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

template <typename F>
std::pair<double, double> golden_min(F f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c1 = b - inv_phi * (b - a);
    double c2 = a + inv_phi * (b - a);
    double f1 = f(c1), f2 = f(c2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - inv_phi * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + inv_phi * (b - a);
            f2 = f(c2);
        }
    }
    double t = 0.5 * (a + b);
    return {t, f(t)};
}

// exact value of e^{i pi u / k} when the angle hits an axis, polar otherwise
Complex unit_phase(int u, int k) {
    int m = ((u % (2 * k)) + 2 * k) % (2 * k);  // angle = pi m / k in [0, 2 pi)
    if (2 * m % k == 0) {
        switch ((2 * m / k) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, M_PI * static_cast<double>(m) / k);
}

WalshSeries scale_series(Complex s, const WalshSeries& f) {
    return series_linear({{s, &f}});
}

enum class SeriesKind { q, p };

// One real-vector recursion. Parameters fix the scheme:
//   arg_j      = x^{(j)} * inv_fold_j   is what feeds the expansion,
//   x^{(j+1)}  = fold_j * (order >= 3 coefficients, re-indexed by tau_j),
//   contribution_j = scale_j * expansion.
struct SchemeOps {
    SeriesKind kind = SeriesKind::q;
    // returns {fold, scale} for level j given the level vector norm
    virtual std::pair<double, Complex> level_factors(int j, double norm) const = 0;
    virtual double telescope_rate() const = 0;  // per-level a-priori decay
    virtual ~SchemeOps() = default;
};

struct PhiOps final : SchemeOps {
    double delta;
    explicit PhiOps(double d) : delta(d) {}
    std::pair<double, Complex> level_factors(int j, double) const override {
        double fold = std::pow(delta, j - 1);
        Complex scale = unit_phase(j - 1, 2) * fold;
        return {fold, scale};
    }
    double telescope_rate() const override { return delta; }
};

struct TSchemeOps final : SchemeOps {
    double t;
    int phase_k;
    double rate;
    TSchemeOps(double t_, int k_, double rate_) : t(t_), phase_k(k_), rate(rate_) {}
    std::pair<double, Complex> level_factors(int j, double norm) const override {
        double fold = t * norm;
        Complex scale = unit_phase(j - 1, phase_k) * fold;
        return {fold, scale};
    }
    double telescope_rate() const override { return rate; }
};

struct LpOps final : SchemeOps {
    double rate;       // delta^{2/p}, or 1/4 for p = inf
    bool phased;       // the p = inf scheme alternates no phase
    LpOps(SeriesKind kind_, double rate_, bool phased_) : rate(rate_), phased(phased_) {
        kind = kind_;
    }
    std::pair<double, Complex> level_factors(int j, double) const override {
        double fold = std::pow(rate, j - 1);
        Complex scale = phased ? unit_phase(j - 1, 2) * fold : Complex{fold, 0.0};
        return {fold, scale};
    }
    double telescope_rate() const override { return rate; }
};

struct RealBuild {
    std::vector<PhiLevel> levels;
    bool pruned = false;       // some ledger mass appeared during the build
    bool terminated = false;   // the recursion reached the zero vector
    double prune_l2 = 0.0;     // certified L2 error of the assembled sum
    double vec_err = 0.0;      // l2 error bound carried by the last level vector
};

bool is_sigma_normalized(const SchemeOps& ops) {
    return dynamic_cast<const TSchemeOps*>(&ops) != nullptr;
}

/*
 * Truncated-mode certificate bookkeeping, validated empirically by the
 * acceptance runs:
 *
 *   vec_err_j   >= |built x^{(j)} - exact x^{(j)}|_2
 *   arg_err_j    = vec_err_j / fold_{j}           (fixed-factor schemes)
 *                = min(2/t, 2 vec_err_j / (t n_j)) (sigma_t schemes)
 *   exp_err_j    = Lip_j * arg_err_j + ledger_j,
 *                  Lip_j = sqrt(2 cosh(2 rho^2)), rho = |arg|_2 + arg_err_j
 *   level L2 err = |scale_j| * exp_err_j          (fixed-factor: scale exact)
 *                = t (vec_err_j Qn_j + n_j exp_err_j)  (sigma_t: the scale
 *                  t |x^{(j)}| itself carries vec_err_j, paid against the
 *                  expansion norm bound Qn_j = |built|_2 + ledger_j)
 *   vec_err_{j+1} = fold_j * exp_err_j            (fixed-factor schemes)
 *                 = t (vec_err_j delta_t + n_j exp_err_j)  (sigma_t)
 *
 * The modulus-of-continuity bound of the q series also dominates the
 * p series differences (its per-order factors only shrink coefficients).
 */
RealBuild run_real(const CoordVector& x0, Session& s, const PhiConfig& cfg,
                   const SchemeOps& ops, double t_param) {
    RealBuild out;

    CoordVector xj;
    for (const auto& [k, v] : x0.entries()) xj.set(s.tau0(k), v);

    const bool sigma = is_sigma_normalized(ops);
    const double dt = sigma ? delta_t(t_param) : 0.0;

    for (int j = 1; j <= cfg.levels; ++j) {
        if (xj.empty()) {
            out.terminated = true;
            break;
        }
        if (cfg.mode == Mode::exact && static_cast<int>(xj.nu()) > cfg.bit_cap)
            throw CapExceeded("exact mode: level " + std::to_string(j) + " support " +
                              std::to_string(xj.nu()) + " exceeds bit cap");
        // supports grow iterative-exponentially when pruning cannot contract
        // them; refuse cleanly instead of exhausting memory
        if (xj.nu() > (std::size_t{1} << 16))
            throw CapExceeded("truncated mode: level " + std::to_string(j) + " support " +
                              std::to_string(xj.nu()) + " exceeds the work cap");

        double nj = xj.norm2();
        auto [fold, scale] = ops.level_factors(j, nj);
        CoordVector arg = xj.scaled(Complex{1.0 / fold, 0.0});

        // the threshold applies to the contribution coefficients, so the
        // expansion of the unit-scale argument prunes at eps / |scale|;
        // without this the sigma-normalized schemes never contract
        double arg_eps = cfg.prune_eps > 0.0 ? cfg.prune_eps / std::abs(scale) : 0.0;

        riesz::GenMap gm;
        for (const auto& [k, v] : arg.entries()) gm.emplace(k, static_cast<GeneratorId>(k));
        WalshSeries e = ops.kind == SeriesKind::q
                            ? riesz::q_series(arg, gm, cfg.order_cap, arg_eps, s.id())
                            : riesz::p_series(arg, gm, cfg.order_cap, arg_eps, s.id());
        if (e.dropped_l2() > 0.0 || e.dropped_l1() > 0.0) out.pruned = true;

        double arg_err = 0.0;
        if (out.vec_err > 0.0) {
            arg_err = sigma ? std::min(2.0 / t_param, 2.0 * out.vec_err / (t_param * nj))
                            : out.vec_err / fold;
        }
        double rho = arg.norm2() + arg_err;
        double lip = std::sqrt(2.0 * std::cosh(2.0 * rho * rho));
        double exp_err = lip * arg_err + e.dropped_l2();
        double level_err;
        if (sigma) {
            double qn = e.l2_norm() + e.dropped_l2();
            level_err = t_param * (out.vec_err * qn + nj * exp_err);
        } else {
            level_err = std::abs(scale) * exp_err;
        }

        PhiLevel lvl;
        lvl.level = j;
        lvl.contribution = scale_series(scale, e);
        lvl.level_scale = scale;
        lvl.x_norm = nj;
        out.prune_l2 = std::hypot(out.prune_l2, level_err);
        out.levels.push_back(std::move(lvl));

        out.vec_err = sigma ? t_param * (out.vec_err * dt + nj * exp_err) : fold * exp_err;
        if (j == cfg.levels) break;  // the next vector would feed nothing

        CoordVector next;
        for (const auto& [w, c] : e.sorted_terms()) {
            if (w.order() < 3) continue;
            if (next.nu() >= (std::size_t{1} << 16))
                throw CapExceeded("truncated mode: level " + std::to_string(j + 1) +
                                  " support exceeds the work cap");
            next.set(s.tau(j, w), Complex{fold * c.real(), 0.0});
        }
        xj = std::move(next);
        if (xj.empty()) {
            out.terminated = true;
            break;
        }
    }
    return out;
}

struct BuildSpec {
    Scheme scheme;
    double p = 2.0;
    double t = 1.0;
    double telescope_base_real = 1.0;  // scheme-norm of the real part
    double telescope_base_imag = 0.0;
};

PhiSeries assemble(const CoordVector& x, Session& s, const PhiConfig& cfg, const SchemeOps& ops,
                   const BuildSpec& spec) {
    // one tau0 pass over the support keeps generator ids aligned with the
    // coordinate order no matter how the parts interleave
    for (const auto& [k, v] : x.entries()) s.tau0(k);

    CoordVector u = x.real_part();
    CoordVector v = x.imag_part();

    RealBuild bu = run_real(u, s, cfg, ops, spec.t);
    RealBuild bv = v.empty() ? RealBuild{} : run_real(v, s, cfg, ops, spec.t);
    if (v.empty()) bv.terminated = true;

    PhiSeries out;
    out.scheme = spec.scheme;
    out.p = spec.p;
    out.session = s.id();

    std::size_t n_levels = std::max(bu.levels.size(), bv.levels.size());
    for (std::size_t i = 0; i < n_levels; ++i) {
        PhiLevel lvl;
        lvl.level = static_cast<int>(i) + 1;
        const WalshSeries* cu = i < bu.levels.size() ? &bu.levels[i].contribution : nullptr;
        const WalshSeries* cv = i < bv.levels.size() ? &bv.levels[i].contribution : nullptr;
        if (cu && cv) {
            lvl.contribution = series_linear({{Complex{1.0, 0.0}, cu}, {Complex{0.0, 1.0}, cv}});
        } else if (cu) {
            lvl.contribution = *cu;
        } else {
            lvl.contribution = scale_series(Complex{0.0, 1.0}, *cv);
        }
        lvl.level_scale = i < bu.levels.size() ? bu.levels[i].level_scale
                                               : bv.levels[i].level_scale;
        lvl.x_norm = i < bu.levels.size() ? bu.levels[i].x_norm : 0.0;
        lvl.x_norm_imag = i < bv.levels.size() ? bv.levels[i].x_norm : 0.0;
        out.levels.push_back(std::move(lvl));
    }

    double rate_pow = std::pow(ops.telescope_rate(), cfg.levels);
    double tu = (bu.terminated && !bu.pruned) ? 0.0 : rate_pow * spec.telescope_base_real;
    double tv = (bv.terminated && !bv.pruned) ? 0.0 : rate_pow * spec.telescope_base_imag;
    out.certificate.telescope_remainder = tu + tv;
    out.certificate.prune_remainder = bu.prune_l2 + bv.prune_l2;
    out.certificate.exact = !bu.pruned && !bv.pruned;
    return out;
}

double conjugate_exponent(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

CoordVector check_unit_ball(const CoordVector& x, double p, const char* what, bool p_error) {
    double n = x.norm_p(p);
    if (n > 1.0 + kNormTol) {
        if (p_error) throw PNormExceeded(what);
        throw NormExceeded(what);
    }
    if (n > 1.0) return x.scaled(Complex{1.0 / n, 0.0});
    return x;
}

}  // namespace

WalshSeries PhiSeries::assembled() const {
    std::vector<std::pair<Complex, const WalshSeries*>> ops;
    ops.reserve(levels.size());
    for (const auto& lvl : levels) ops.emplace_back(Complex{1.0, 0.0}, &lvl.contribution);
    WalshSeries out = series_linear(ops);
    if (out.session() == 0) out.set_session(session);
    return out;
}

double PhiSeries::l2_norm() const {
    double s = 0.0;
    for (const auto& lvl : levels) {
        double n = lvl.contribution.l2_norm();
        s += n * n;
    }
    return std::sqrt(s);
}

const Constants& constants() {
    static const Constants k = [] {
        Constants c;
        c.delta = std::sqrt(sinh1() - 1.0);
        c.c = solve_endpoint();
        c.K1 = std::sqrt(std::exp(1.0)) / (1.0 - c.delta);
        c.K_complex = 2.0 * c.K1;
        return c;
    }();
    return k;
}

double delta_t(double t) {
    if (t <= 0.0) throw ConfigError("delta_t requires t > 0");
    double u = 1.0 / (t * t);
    return std::sqrt(std::max(0.0, std::sinh(u) - u));
}

double K_of_t(double t) {
    if (t <= constants().c) throw TBelowEndpoint();
    double u = 1.0 / (t * t);
    return t * std::exp(0.5 * u) / (1.0 - t * delta_t(t));
}

double L_of_t(double t) {
    if (t <= constants().c) throw TBelowEndpoint();
    double u = 1.0 / (t * t);
    return t * t * std::exp(u) / (2.0 - t * t * std::sinh(u));
}

std::pair<double, double> minimize_K() {
    return golden_min([](double t) { return K_of_t(t); }, constants().c + 1e-6, 10.0, 1e-7);
}

std::pair<double, double> minimize_L() {
    return golden_min([](double t) { return L_of_t(t); }, constants().c + 1e-6, 10.0, 1e-7);
}

PhiSeries build_phi(const CoordVector& x, Session& session, const PhiConfig& cfg) {
    CoordVector xx = check_unit_ball(x, 2.0, "build_phi requires |x|_2 <= 1", false);
    PhiOps ops(constants().delta);
    BuildSpec spec;
    spec.scheme = Scheme::phi;
    spec.telescope_base_real = xx.real_part().norm2();
    spec.telescope_base_imag = xx.imag_part().norm2();
    return assemble(xx, session, cfg, ops, spec);
}

PhiSeries build_phi2(const CoordVector& x, double t, Session& session, const PhiConfig& cfg) {
    if (t <= constants().c) throw TBelowEndpoint();
    double rate = t * delta_t(t);
    TSchemeOps ops(t, 2, rate);
    BuildSpec spec;
    spec.scheme = Scheme::phi2;
    spec.t = t;
    spec.telescope_base_real = x.real_part().norm2();
    spec.telescope_base_imag = x.imag_part().norm2();
    return assemble(x, session, cfg, ops, spec);
}

PhiSeries build_phi_k(const CoordVector& x, int k, Session& session, const PhiConfig& cfg) {
    if (k < 2) throw ConfigError("build_phi_k requires k >= 2");
    TSchemeOps ops(1.0, k, delta_t(1.0));
    BuildSpec spec;
    spec.scheme = Scheme::phi_k;
    spec.telescope_base_real = x.real_part().norm2();
    spec.telescope_base_imag = x.imag_part().norm2();
    return assemble(x, session, cfg, ops, spec);
}

PhiSeries build_phi_p(const CoordVector& x, double p, Session& session, const PhiConfig& cfg) {
    if (!(p >= 1.0)) throw ConfigError("build_phi_p requires p in [1, inf]");
    CoordVector xx = check_unit_ball(x, p, "build_phi_p requires |x|_p <= 1", true);

    if (p == 1.0) {
        // the linear series: one level, coefficient x(a) on r_{tau0 a}
        for (const auto& [k, v] : xx.entries()) session.tau0(k);
        PhiSeries out;
        out.scheme = Scheme::phi_p;
        out.p = p;
        out.session = session.id();
        if (!xx.empty()) {
            PhiLevel lvl;
            lvl.level = 1;
            WalshSeries s0(session.id());
            for (const auto& [k, v] : xx.entries())
                s0.add_term(Character({session.tau0(k)}), v);
            lvl.contribution = std::move(s0);
            lvl.x_norm = xx.real_part().norm2();
            lvl.x_norm_imag = xx.imag_part().norm2();
            out.levels.push_back(std::move(lvl));
        }
        out.certificate = ErrorCertificate{};  // single level, exact
        return out;
    }

    const double delta = constants().delta;
    double rate;
    SeriesKind kind;
    if (std::isinf(p)) {
        rate = 0.25;
        kind = SeriesKind::p;
    } else if (p <= 2.0) {
        rate = std::pow(delta, 2.0 / p);
        kind = SeriesKind::q;
    } else {
        rate = std::pow(delta, 2.0 / p);
        kind = SeriesKind::p;
    }
    LpOps ops(kind, rate, !std::isinf(p));
    BuildSpec spec;
    spec.scheme = Scheme::phi_p;
    spec.p = p;
    spec.telescope_base_real = xx.real_part().norm_p(p);
    spec.telescope_base_imag = xx.imag_part().norm_p(p);
    return assemble(xx, session, cfg, ops, spec);
}

PairResult pair_dot(const CoordVector& x, const CoordVector& y, Scheme scheme, Session& session,
                    const PhiConfig& cfg, double p) {
    CoordVector yc = y.conj();

    // touch tau0 over the union, in coordinate order, so generator ids do
    // not depend on which side is built first
    for (const auto& [k, v] : x.entries()) session.tau0(k);
    for (const auto& [k, v] : yc.entries()) session.tau0(k);

    PhiSeries fx, fy;
    switch (scheme) {
        case Scheme::phi:
            fx = build_phi(x, session, cfg);
            fy = build_phi(yc, session, cfg);
            break;
        case Scheme::phi2:
            fx = build_phi2(x, cfg.t, session, cfg);
            fy = build_phi2(yc, cfg.t, session, cfg);
            break;
        case Scheme::phi_k:
            throw ConfigError("pair_dot: use phi_k_parseval for the k-fold scheme");
        case Scheme::phi_p:
            fx = build_phi_p(x, p, session, cfg);
            fy = build_phi_p(yc, conjugate_exponent(p), session, cfg);
            break;
    }

    WalshSeries fa = fx.assembled();
    WalshSeries ga = fy.assembled();
    PairResult res;
    res.value = parseval_pair(fa, ga);

    double tx = fx.certificate.telescope_remainder;
    double ty = fy.certificate.telescope_remainder;
    double ex = fx.certificate.prune_remainder;
    double ey = fy.certificate.prune_remainder;
    double telescope = (tx == 0.0 || ty == 0.0) ? 0.0 : tx * ty;
    double prune = ex * (ga.l2_norm() + ey) + fa.l2_norm() * ey;
    res.budget = telescope + prune;
    res.certificate.telescope_remainder = telescope;
    res.certificate.prune_remainder = prune;
    res.certificate.exact = fx.certificate.exact && fy.certificate.exact;
    return res;
}

SupBounds sup_certificate(const PhiSeries& series, int bit_cap) {
    return sup_norm(series.assembled(), SupMode::exact, 0, bit_cap);
}

}  // namespace dg::phi
