// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "dg/multilinear.hpp"
#include "dg/phi.hpp"
#include "dg/rng.hpp"
#include "test_support.hpp"

using namespace dg;
namespace ml = dg::multilinear;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(const char* id, bool pass, const std::string& detail, double elapsed,
            double limit) {
    bool in_time = limit <= 0.0 || elapsed < limit;
    bool ok = pass && in_time;
    if (!ok) ++g_failures;
    std::printf("[%s] %s: %s (%.3fs%s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), elapsed,
                limit > 0.0 ? (" < " + std::to_string(limit) + "s limit").c_str() : "");
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// C1: 500 seeded pairs, nu <= 3, scheme phi exact at J=4, defect <= 1e-12
void criterion1() {
    Timer timer;
    phi::PhiConfig cfg;
    cfg.levels = 4;
    double max_defect = 0.0;
    for (int i = 0; i < 500; ++i) {
        CounterRng rng(1001, i);
        int nu_x = 1 + static_cast<int>(rng.uniform_int(3));
        int nu_y = 1 + static_cast<int>(rng.uniform_int(3));
        CoordVector x = dgtest::random_unit_vector(rng, 6, nu_x);
        CoordVector y = dgtest::random_unit_vector(rng, 6, nu_y);
        Session s;
        auto r = phi::pair_dot(x, y, phi::Scheme::phi, s, cfg);
        max_defect = std::max(max_defect, std::abs(r.value - dot_conj(x, y)));
    }
    report("C1 exact-parseval", max_defect <= 1e-12,
           "500 pairs nu<=3, max defect " + fmt(max_defect) + " <= 1e-12", timer.seconds(), 1.0);
}

// C2: certified defect bound contracts by delta^2 per extra level for nu = 4
void criterion2() {
    Timer timer;
    const double delta2 = std::sinh(1.0) - 1.0;
    std::vector<CoordVector> vectors;
    vectors.push_back(dgtest::vec({0.5, 0.5, 0.5, 0.5}));
    for (int i = 0; i < 3; ++i) {
        CounterRng rng(1002, i);
        vectors.push_back(dgtest::random_unit_vector(rng, 6, 4));
    }
    double ratio_sum = 0.0;
    int ratio_count = 0;
    bool sound = true;
    for (const CoordVector& x : vectors) {
        std::vector<double> budget(12, 0.0);
        for (int levels = 3; levels <= 11; ++levels) {
            Session s;
            phi::PhiConfig cfg;
            cfg.levels = levels;
            auto r = phi::pair_dot(x, x, phi::Scheme::phi, s, cfg);
            budget[levels] = r.budget;
            double defect = std::abs(r.value - dot_conj(x, x));
            if (defect > r.budget) sound = false;
        }
        for (int levels = 3; levels <= 10; ++levels) {
            ratio_sum += budget[levels + 1] / budget[levels];
            ++ratio_count;
        }
    }
    double mean = ratio_sum / ratio_count;
    report("C2 geometric-telescoping", sound && std::abs(mean - delta2) <= 0.02,
           "mean certified-defect ratio " + fmt(mean) + " vs delta^2 " + fmt(delta2) +
               " (tol 0.02), defect <= budget at every J",
           timer.seconds(), 5.0);
}

// C3: uniform bounds sqrt(e)/(1-delta) and twice that for complex input
void criterion3() {
    Timer timer;
    const auto& k = phi::constants();
    double worst_real = 0.0, worst_complex = 0.0;
    for (int i = 0; i < 200; ++i) {
        CounterRng rng(1003, i);
        CoordVector x = dgtest::random_unit_vector(rng, 7, 1 + static_cast<int>(rng.uniform_int(4)));
        Session s;
        worst_real = std::max(worst_real, phi::sup_certificate(phi::build_phi(x, s)).upper);
    }
    for (int i = 0; i < 200; ++i) {
        CounterRng rng(1004, i);
        CoordVector x =
            dgtest::random_complex_unit_vector(rng, 7, 1 + static_cast<int>(rng.uniform_int(4)));
        Session s;
        worst_complex = std::max(worst_complex, phi::sup_certificate(phi::build_phi(x, s)).upper);
    }
    bool pass = worst_real <= k.K1 + 1e-9 && worst_complex <= k.K_complex + 1e-9;
    report("C3 uniform-bound", pass,
           "max real sup " + fmt(worst_real) + " <= " + fmt(k.K1) + ", max complex sup " +
               fmt(worst_complex) + " <= " + fmt(k.K_complex),
           timer.seconds(), 10.0);
}

// C4: the scheme constants at their published values
void criterion4() {
    Timer timer;
    const auto& k = phi::constants();
    auto [tk, kmin] = phi::minimize_K();
    auto [tl, lmin] = phi::minimize_L();
    bool pass = std::abs(k.delta - 0.418571) <= 1e-5 && std::abs(k.c - 0.6777) <= 5e-4 &&
                std::abs(phi::K_of_t(1.0) - 2.836) <= 1e-3 && std::abs(tk - 1.429) <= 2e-3 &&
                std::abs(kmin - 2.285) <= 1e-3 && std::abs(tl - 1.141) <= 2e-3 &&
                std::abs(lmin - 3.123) <= 1e-3;
    report("C4 constants", pass,
           "delta=" + fmt(k.delta) + " c=" + fmt(k.c) + " K(1)=" + fmt(phi::K_of_t(1.0)) +
               " K_min=(" + fmt(tk) + "," + fmt(kmin) + ") L_min=(" + fmt(tl) + "," + fmt(lmin) +
               ")",
           timer.seconds(), 0.1);
}

// C5: the L2 modulus-of-continuity certificate dominates the exact distance
void criterion5() {
    Timer timer;
    bool pass = true;
    double worst_margin = kInf;
    for (int i = 0; i < 200; ++i) {
        CounterRng rng(1005, i);
        int nu_x = 1 + static_cast<int>(rng.uniform_int(8));
        int nu_y = 1 + static_cast<int>(rng.uniform_int(8));
        CoordVector x = dgtest::random_real_vector(rng, 8, nu_x);
        CoordVector y = dgtest::random_real_vector(rng, 8, nu_y);
        if (x.norm2() > 1.0) x = dgtest::normalized(x);
        if (y.norm2() > 1.0) y = dgtest::normalized(y);
        riesz::GenMap gm;
        for (int c = 0; c < 8; ++c) gm.emplace(c, static_cast<GeneratorId>(c));
        WalshSeries qx = riesz::q_series(x, gm);
        WalshSeries qy = riesz::q_series(y, gm);
        WalshSeries diff = series_linear({{{1.0, 0.0}, &qx}, {{-1.0, 0.0}, &qy}});
        double actual = diff.l2_norm();
        double bound = riesz::lipschitz_bound(x, y);
        worst_margin = std::min(worst_margin, bound - actual);
        if (actual > bound + 1e-12) pass = false;
    }
    report("C5 lipschitz", pass, "200 pairs, min certificate margin " + fmt(worst_margin),
           timer.seconds(), 2.0);
}

// C6: homogeneity of the t=1 scheme and oddness, coefficientwise to 1e-12
void criterion6() {
    Timer timer;
    bool pass = true;
    for (int i = 0; i < 100; ++i) {
        CounterRng rng(1006, i);
        CoordVector x = dgtest::random_real_vector(rng, 6, 1 + static_cast<int>(rng.uniform_int(4)));
        Complex xi{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        {
            Session s;
            WalshSeries lhs = phi::build_phi2(x.scaled(xi), 1.0, s).assembled();
            WalshSeries base = phi::build_phi2(x, 1.0, s).assembled();
            WalshSeries rhs = series_linear({{xi, &base}});
            WalshSeries diff = series_linear({{{1.0, 0.0}, &lhs}, {{-1.0, 0.0}, &rhs}});
            for (const auto& [w, c] : diff.coeffs())
                if (std::abs(c) > 1e-12) pass = false;
        }
        {
            CoordVector u = dgtest::normalized(x);
            Session s;
            WalshSeries a = phi::build_phi(u, s).assembled();
            WalshSeries b = phi::build_phi(u.scaled({-1.0, 0.0}), s).assembled();
            WalshSeries sum = series_linear({{{1.0, 0.0}, &a}, {{1.0, 0.0}, &b}});
            for (const auto& [w, c] : sum.coeffs())
                if (std::abs(c) > 1e-12) pass = false;
        }
    }
    report("C6 homogeneity-oddness", pass, "100 vectors, coefficientwise to 1e-12",
           timer.seconds(), 0.0);
}

// C7: lp pairings across the exponent range with certified budgets
void criterion7() {
    Timer timer;
    bool pass = true;
    double max_defect = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
        double q = p == 1.0 ? kInf : (std::isinf(p) ? 1.0 : p / (p - 1.0));
        for (int i = 0; i < 100; ++i) {
            CounterRng rng(1007 + static_cast<int>(p * 7), i);
            int nu_x = 1 + static_cast<int>(rng.uniform_int(3));
            int nu_y = 1 + static_cast<int>(rng.uniform_int(3));
            CoordVector x = dgtest::normalized(dgtest::random_real_vector(rng, 6, nu_x), p);
            CoordVector y = dgtest::normalized(dgtest::random_real_vector(rng, 6, nu_y), q);
            Session s;
            auto r = phi::pair_dot(x, y, phi::Scheme::phi_p, s, {}, p);
            double defect = std::abs(r.value - dot_conj(x, y));
            if (defect > r.budget + 1e-12) pass = false;
            if (r.certificate.exact && r.budget == 0.0 && defect > 1e-8) pass = false;
            max_defect = std::max(max_defect, defect);
        }
    }
    report("C7 lp-pairing", pass,
           "p in {1,3/2,2,3,inf}, 100 pairs each, max defect " + fmt(max_defect),
           timer.seconds(), 0.0);
}

// C8: fractional convolution vs brute force and k-fold spectral pairings
void criterion8() {
    Timer timer;
    bool pass = true;
    double max_defect = 0.0;
    auto u = ml::CoveringSequence::parse("1,2;2,3;1,3");
    for (int alphabet : {2, 3}) {
        ml::Theta one = ml::Theta::constant(3, alphabet, {1.0, 0.0});
        for (int i = 0; i < 50; ++i) {
            CounterRng rng(1008 + alphabet, i);
            auto rand_arg = [&] {
                CoordVector x;
                for (int a = 0; a < alphabet * alphabet; ++a)
                    x.set(a, Complex{rng.uniform(-1.0, 1.0), 0.0});
                return x;
            };
            CoordVector x = rand_arg(), y = rand_arg(), z = rand_arg();
            Session r1, r2, r3;
            ml::SlotTable tx = ml::build_phi_tuple(x, alphabet, {2, 2}, {&r1, &r2});
            ml::SlotTable ty = ml::build_phi_tuple(y, alphabet, {2, 2}, {&r2, &r3});
            ml::SlotTable tz = ml::build_phi_tuple(z, alphabet, {2, 2}, {&r1, &r3});
            double defect = std::abs(ml::frac_convolution(u, {tx, ty, tz}) -
                                     ml::eta_bruteforce(u, one, {x, y, z}));
            max_defect = std::max(max_defect, defect);
            if (defect > 1e-9) pass = false;
        }
    }
    for (int k : {2, 3, 4}) {
        for (int i = 0; i < 25; ++i) {
            CounterRng rng(1010 + k, i);
            phi::PhiConfig cfg;
            cfg.levels = 6;
            std::vector<CoordVector> xs;
            for (int j = 0; j < k; ++j)
                xs.push_back(dgtest::random_unit_vector(
                    rng, 5, 1 + static_cast<int>(rng.uniform_int(4))));
            Session s;
            auto r = ml::phi_k_parseval(xs, k, s, cfg);
            Complex brute{0.0, 0.0};
            for (int a = 0; a < 5; ++a) {
                Complex term{1.0, 0.0};
                for (const auto& x : xs) term *= x.at(a);
                brute += term;
            }
            if (std::abs(r.value - brute) > r.budget + 1e-12) pass = false;
        }
    }
    report("C8 multilinear-parseval", pass,
           "3/2-product |A| in {2,3} max defect " + fmt(max_defect) +
               " <= 1e-9; k-fold k in {2,3,4} within budgets",
           timer.seconds(), 30.0);
}

// C9: the unit-ball bound whenever every incidence is at least 2
void criterion9() {
    Timer timer;
    bool pass = true;
    const char* pool[] = {"1;1",          "1;1;1",        "1,2;1,2",     "1,2;2,3;1,3",
                          "1,2,3;1,2,3",  "1,2;1,2;2",    "1;1;1;1",     "1,2;2;1",
                          "1,2,4;2,3,4;1,3,4", "1,2,3,4;1,2,3,4"};
    for (int i = 0; i < 200; ++i) {
        CounterRng rng(1009, i);
        auto u = ml::CoveringSequence::parse(pool[rng.uniform_int(10)]);
        if (u.min_incidence() < 2) {
            pass = false;
            continue;
        }
        int alphabet = 2 + static_cast<int>(rng.uniform_int(2));
        ml::Theta theta = ml::Theta::constant(u.m, alphabet, {0.0, 0.0});
        double sup_theta = 0.0;
        for (auto& v : theta.values) {
            v = Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            sup_theta = std::max(sup_theta, std::abs(v));
        }
        std::vector<CoordVector> args;
        double norm_product = 1.0;
        for (const auto& set : u.sets) {
            CoordVector x;
            std::uint64_t size = 1;
            for (std::size_t r = 0; r < set.size(); ++r) size *= alphabet;
            for (std::uint64_t kk = 0; kk < size; ++kk)
                x.set(kk, Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
            norm_product *= x.norm2();
            args.push_back(std::move(x));
        }
        Complex v = ml::eta_bruteforce(u, theta, args);
        if (std::abs(v) > sup_theta * norm_product + 1e-10) pass = false;
    }
    report("C9 eta-bound", pass, "200 random instances of |eta| <= |theta|_inf prod |x_i|_2",
           timer.seconds(), 0.0);
}

// C10: packing values, standard-form reduction, gauge values
void criterion10() {
    Timer timer;
    bool pass = true;
    pass &= ml::alpha_lp(ml::CoveringSequence::parse("1;1;1")) == ml::Rational{1, 1};
    pass &= ml::alpha_lp(ml::CoveringSequence::parse("1,2;2,3;1,3")) == ml::Rational{3, 2};
    pass &= ml::alpha_lp(ml::CoveringSequence::parse("1,2,4;2,3,4;1,3,4")) == ml::Rational{3, 2};
    pass &= ml::alpha_lp(ml::CoveringSequence::parse("1,2,4;2,3,4;1,3")) == ml::Rational{3, 2};
    pass &= ml::standard_form(ml::CoveringSequence::parse("1,2;1;2")).to_string() == "1;1;1";
    pass &= ml::standard_form(ml::CoveringSequence::parse("1,2,3;2,3;3")).to_string() == "1;1;1";
    for (int k : {2, 3}) {
        ml::PointSet f = ml::three_halves_product(k);
        pass &= ml::psi_gauge(f, k * k, ml::PsiMode::witness) >= k * k * k;
    }
    pass &= ml::psi_gauge(ml::three_halves_product(2), 4, ml::PsiMode::exhaustive) == 8;
    report("C10 combinatorics", pass,
           "alpha on the standard 3-sequences, reductions, gauge witnesses", timer.seconds(),
           0.0);
}

// C11: the heuristic norm lower bound grows with N under a fixed seed
void criterion11() {
    Timer timer;
    bool pass = true;
    double prev = 0.0;
    std::string trace;
    for (int n : {2, 4, 6, 8}) {
        auto r = ml::ksz_demo(n, 5, 1500, 4242);
        trace += (trace.empty() ? "" : " -> ") + fmt(r.vnorm_lower);
        if (r.vnorm_lower <= prev) pass = false;
        prev = r.vnorm_lower;
    }
    report("C11 ksz-monotone", pass, "vnorm lower bounds " + trace, timer.seconds(), 0.0);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
