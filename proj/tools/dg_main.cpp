// dg: seeded verification campaigns and experiments over the dyadic-group
// spectral library. Every command is deterministic in (command, seed, flags);
// reports go to stdout or --out as CSV (default) or JSON.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dg/json_io.hpp"
#include "dg/multilinear.hpp"
#include "dg/phi.hpp"
#include "dg/rng.hpp"

namespace ml = dg::multilinear;
using dg::Complex;
using dg::CoordVector;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
    std::uint64_t case_id = 0;
    std::string digest;
    std::string scheme;
    int dim = 0;
    int levels = 0;
    Complex value{0.0, 0.0};
    Complex expected{0.0, 0.0};
    double defect = 0.0;
    double budget = 0.0;
    bool pass = true;
};

struct Report {
    std::string command;
    std::vector<Row> rows;

    bool all_pass() const {
        return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
    }
};

std::string fnv_digest(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string vector_digest(const CoordVector& x) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& [k, v] : x.entries()) os << k << ':' << v.real() << ',' << v.imag() << ';';
    return os.str();
}

std::string timestamp_utc() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_csv(std::ostream& os, const Report& report) {
    os << "# dg " << report.command << " generated=" << timestamp_utc() << "\n";
    os << "case,digest,scheme,dim,levels,value_re,value_im,expected_re,expected_im,defect,"
          "budget,pass\n";
    for (const Row& r : report.rows) {
        os << r.case_id << ',' << r.digest << ',' << r.scheme << ',' << r.dim << ',' << r.levels
           << ',' << fmt_double(r.value.real()) << ',' << fmt_double(r.value.imag()) << ','
           << fmt_double(r.expected.real()) << ',' << fmt_double(r.expected.imag()) << ','
           << fmt_double(r.defect) << ',' << fmt_double(r.budget) << ','
           << (r.pass ? "1" : "0") << "\n";
    }
}

void write_json(std::ostream& os, const Report& report) {
    json rows = json::array();
    for (const Row& r : report.rows) {
        rows.push_back({{"case", r.case_id},
                        {"digest", r.digest},
                        {"scheme", r.scheme},
                        {"dim", r.dim},
                        {"levels", r.levels},
                        {"value", {{"re", r.value.real()}, {"im", r.value.imag()}}},
                        {"expected", {{"re", r.expected.real()}, {"im", r.expected.imag()}}},
                        {"defect", r.defect},
                        {"budget", r.budget},
                        {"pass", r.pass}});
    }
    os << rows.dump(2) << "\n";
}

int emit(const Report& report, const std::string& format, const std::string& out_path) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw dg::ConfigError("cannot open output path " + out_path);
        os = &file;
    }
    if (format == "json") {
        write_json(*os, report);
    } else {
        write_csv(*os, report);
    }
    return report.all_pass() ? 0 : 2;
}

unsigned worker_count(std::uint64_t cases) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("DG_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    if (n < 1) n = 1;
    return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(cases, 1)));
}

/** Runs fn(i) for i in [0, cases), strided over a pool; rows stay ordered by case. */
template <typename Fn>
std::vector<Row> run_cases(std::uint64_t cases, Fn fn) {
    std::vector<Row> rows(cases);
    unsigned workers = worker_count(cases);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < cases; ++i) rows[i] = fn(i);
        return rows;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t i = w; i < cases; i += workers) rows[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

CoordVector random_vector_for_case(dg::CounterRng& rng, int dim, int support) {
    CoordVector x;
    std::vector<int> coords(dim);
    for (int i = 0; i < dim; ++i) coords[i] = i;
    for (int i = 0; i < support; ++i) {
        std::uint64_t j = i + rng.uniform_int(dim - i);
        std::swap(coords[i], coords[j]);
    }
    for (int i = 0; i < support; ++i)
        x.set(coords[i], Complex{rng.sign() * rng.uniform(0.1, 1.0), 0.0});
    return x;
}

CoordVector normalize_p(const CoordVector& x, double p) {
    double n = x.norm_p(p);
    return n == 0.0 ? x : x.scaled(Complex{1.0 / n, 0.0});
}

double parse_exponent(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF") return kInf;
    try {
        std::size_t pos = 0;
        double p = std::stod(text, &pos);
        if (pos != text.size() || !(p >= 1.0)) throw dg::ConfigError("bad exponent " + text);
        return p;
    } catch (const std::exception&) {
        throw dg::ConfigError("bad exponent " + text);
    }
}

struct CommonFlags {
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "campaign seed");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "write the report here instead of stdout");
    }
};

int cmd_constants(const CommonFlags& flags) {
    const auto& k = dg::phi::constants();
    auto [tk, kmin] = dg::phi::minimize_K();
    auto [tl, lmin] = dg::phi::minimize_L();

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!flags.out_path.empty()) {
        file.open(flags.out_path);
        if (!file) throw dg::ConfigError("cannot open output path " + flags.out_path);
        os = &file;
    }
    if (flags.format == "json") {
        json j = {{"delta", k.delta}, {"c", k.c},          {"K1", k.K1},
                  {"t_min_K", tk},    {"K_min", kmin},     {"t_min_L", tl},
                  {"L_min", lmin},    {"K_complex", k.K_complex}};
        *os << j.dump(2) << "\n";
        return 0;
    }
    char buf[64];
    auto line = [&](const char* name, double v) {
        std::snprintf(buf, sizeof(buf), "%-10s %.6f\n", name, v);
        *os << buf;
    };
    line("delta", k.delta);
    line("c", k.c);
    line("K1", k.K1);
    line("t_min_K", tk);
    line("K_min", kmin);
    line("t_min_L", tl);
    line("L_min", lmin);
    return 0;
}

struct ParsevalFlags {
    int dim = 3;
    int levels = 10;
    std::uint64_t trials = 100;
    std::string scheme = "phi";
    double t = 1.0;
    std::string mode = "exact";
    double prune_eps = -1.0;
    int order_cap = 9;
    bool complex_vectors = false;
};

int cmd_verify_parseval(const CommonFlags& flags, const ParsevalFlags& pf) {
    if (pf.dim < 1) throw dg::ConfigError("--dim must be positive");
    dg::phi::PhiConfig cfg =
        pf.mode == "truncated" ? dg::phi::PhiConfig::truncated() : dg::phi::PhiConfig{};
    cfg.levels = pf.levels;
    cfg.order_cap = pf.order_cap;
    cfg.t = pf.t;
    if (pf.prune_eps >= 0.0) cfg.prune_eps = pf.prune_eps;
    dg::phi::Scheme scheme =
        pf.scheme == "phi2" ? dg::phi::Scheme::phi2 : dg::phi::Scheme::phi;

    Report report;
    report.command = "verify-parseval";
    report.rows = run_cases(pf.trials, [&](std::uint64_t i) {
        dg::CounterRng rng(flags.seed, i);
        CoordVector x = normalize_p(random_vector_for_case(rng, pf.dim, pf.dim), 2.0);
        CoordVector y = normalize_p(random_vector_for_case(rng, pf.dim, pf.dim), 2.0);
        if (pf.complex_vectors) {
            CoordVector xi = random_vector_for_case(rng, pf.dim, pf.dim);
            CoordVector yi = random_vector_for_case(rng, pf.dim, pf.dim);
            CoordVector cx, cy;
            for (int k = 0; k < pf.dim; ++k) {
                cx.set(k, Complex{x.at(k).real(), xi.at(k).real()});
                cy.set(k, Complex{y.at(k).real(), yi.at(k).real()});
            }
            x = normalize_p(cx, 2.0);
            y = normalize_p(cy, 2.0);
        }
        dg::Session session;
        auto r = dg::phi::pair_dot(x, y, scheme, session, cfg);
        Row row;
        row.case_id = i;
        row.digest = fnv_digest(vector_digest(x) + "|" + vector_digest(y));
        row.scheme = pf.scheme;
        row.dim = pf.dim;
        row.levels = pf.levels;
        row.value = r.value;
        row.expected = dg::dot_conj(x, y);
        row.defect = std::abs(row.value - row.expected);
        row.budget = r.budget;
        row.pass = row.defect <= row.budget + 1e-12;
        return row;
    });
    return emit(report, flags.format, flags.out_path);
}

struct LpFlags {
    std::string p = "2";
    int dim = 4;
    std::uint64_t trials = 100;
    int levels = 10;
};

int cmd_verify_lp_pairing(const CommonFlags& flags, const LpFlags& lf) {
    double p = parse_exponent(lf.p);
    double q = p == 1.0 ? kInf : (std::isinf(p) ? 1.0 : p / (p - 1.0));
    dg::phi::PhiConfig cfg;
    cfg.levels = lf.levels;

    Report report;
    report.command = "verify-lp-pairing";
    report.rows = run_cases(lf.trials, [&](std::uint64_t i) {
        dg::CounterRng rng(flags.seed, i);
        int support = 1 + static_cast<int>(rng.uniform_int(std::min(lf.dim, 3)));
        CoordVector x = normalize_p(random_vector_for_case(rng, lf.dim, support), p);
        CoordVector y = normalize_p(
            random_vector_for_case(rng, lf.dim, 1 + static_cast<int>(rng.uniform_int(
                                                       std::min(lf.dim, 3)))),
            q);
        dg::Session session;
        auto r = dg::phi::pair_dot(x, y, dg::phi::Scheme::phi_p, session, cfg, p);
        Row row;
        row.case_id = i;
        row.digest = fnv_digest(vector_digest(x) + "|" + vector_digest(y));
        row.scheme = "phi_p(" + lf.p + ")";
        row.dim = lf.dim;
        row.levels = lf.levels;
        row.value = r.value;
        row.expected = dg::dot_conj(x, y);
        row.defect = std::abs(row.value - row.expected);
        row.budget = r.budget;
        row.pass = row.defect <= row.budget + 1e-12;
        return row;
    });
    return emit(report, flags.format, flags.out_path);
}

struct MultiFlags {
    int alphabet = 2;
    std::uint64_t trials = 20;
    std::vector<int> ks{2, 3, 4};
    int levels = 6;
};

int cmd_verify_multilinear(const CommonFlags& flags, const MultiFlags& mf) {
    if (mf.alphabet < 1 || mf.alphabet > 3)
        throw dg::ConfigError("--alphabet must be 1, 2 or 3");
    auto u = ml::CoveringSequence::parse("1,2;2,3;1,3");
    ml::Theta one = ml::Theta::constant(3, mf.alphabet, {1.0, 0.0});

    Report report;
    report.command = "verify-multilinear";

    // part A: fractional convolution against the brute-force functional
    std::vector<Row> part_a = run_cases(mf.trials, [&](std::uint64_t i) {
        dg::CounterRng rng(flags.seed, i);
        auto rand_arg = [&] {
            CoordVector x;
            for (int a = 0; a < mf.alphabet * mf.alphabet; ++a)
                x.set(a, Complex{rng.uniform(-1.0, 1.0), 0.0});
            return x;
        };
        CoordVector x = rand_arg(), y = rand_arg(), z = rand_arg();
        dg::Session r1, r2, r3;
        ml::SlotTable tx = ml::build_phi_tuple(x, mf.alphabet, {2, 2}, {&r1, &r2});
        ml::SlotTable ty = ml::build_phi_tuple(y, mf.alphabet, {2, 2}, {&r2, &r3});
        ml::SlotTable tz = ml::build_phi_tuple(z, mf.alphabet, {2, 2}, {&r1, &r3});
        Row row;
        row.case_id = i;
        row.digest =
            fnv_digest(vector_digest(x) + "|" + vector_digest(y) + "|" + vector_digest(z));
        row.scheme = "frac(1,2;2,3;1,3)";
        row.dim = mf.alphabet;
        row.value = ml::frac_convolution(u, {tx, ty, tz});
        row.expected = ml::eta_bruteforce(u, one, {x, y, z});
        row.defect = std::abs(row.value - row.expected);
        row.budget = 1e-9;
        row.pass = row.defect <= row.budget;
        return row;
    });

    // part B: spectral k-fold pairings against the direct product sum
    std::vector<Row> part_b;
    for (int k : mf.ks) {
        std::vector<Row> rows = run_cases(mf.trials, [&](std::uint64_t i) {
            dg::CounterRng rng(flags.seed ^ (0xABCD0000ULL + k), i);
            dg::phi::PhiConfig cfg;
            cfg.levels = mf.levels;
            std::vector<CoordVector> xs;
            for (int j = 0; j < k; ++j)
                xs.push_back(
                    normalize_p(random_vector_for_case(rng, 5, 1 + (i + j) % 4), 2.0));
            dg::Session s;
            auto r = ml::phi_k_parseval(xs, k, s, cfg);
            Complex brute{0.0, 0.0};
            for (int a = 0; a < 5; ++a) {
                Complex term{1.0, 0.0};
                for (const auto& x : xs) term *= x.at(a);
                brute += term;
            }
            std::string digest;
            for (const auto& x : xs) digest += vector_digest(x) + "|";
            Row row;
            row.case_id = i;
            row.digest = fnv_digest(digest);
            row.scheme = "kfold(" + std::to_string(k) + ")";
            row.dim = 5;
            row.levels = mf.levels;
            row.value = r.value;
            row.expected = brute;
            row.defect = std::abs(row.value - row.expected);
            row.budget = r.budget;
            row.pass = row.defect <= row.budget + 1e-12;
            return row;
        });
        part_b.insert(part_b.end(), rows.begin(), rows.end());
    }

    report.rows = std::move(part_a);
    for (std::size_t i = 0; i < part_b.size(); ++i) {
        part_b[i].case_id = report.rows.size();
        report.rows.push_back(std::move(part_b[i]));
    }
    return emit(report, flags.format, flags.out_path);
}

struct PsiFlags {
    std::string family = "three-halves";
    int k = 2;
    int s = 4;
    bool witness = false;
};

int cmd_psi(const CommonFlags& flags, const PsiFlags& pf) {
    ml::PointSet f;
    if (pf.family == "three-halves") {
        f = ml::three_halves_product(pf.k);
    } else if (pf.family == "full") {
        f.d = 2;
        f.universe = {pf.k, pf.k};
        for (int a = 0; a < pf.k; ++a)
            for (int b = 0; b < pf.k; ++b) f.points.push_back({a, b});
    } else if (pf.family == "diagonal") {
        f.d = 2;
        f.universe = {pf.k, pf.k};
        for (int a = 0; a < pf.k; ++a) f.points.push_back({a, a});
    } else {
        throw dg::ConfigError("--family must be three-halves, full or diagonal");
    }
    std::int64_t value =
        ml::psi_gauge(f, pf.s, pf.witness ? ml::PsiMode::witness : ml::PsiMode::exhaustive);
    Row row;
    row.digest = fnv_digest(pf.family + "/" + std::to_string(pf.k) + "/" + std::to_string(pf.s));
    row.scheme = std::string(pf.witness ? "psi-witness(" : "psi(") + pf.family + ")";
    row.dim = pf.k;
    row.value = Complex{static_cast<double>(value), 0.0};
    row.expected = row.value;
    Report report;
    report.command = "psi";
    report.rows.push_back(row);
    return emit(report, flags.format, flags.out_path);
}

struct KszFlags {
    int n = 8;
    int trials = 5;
    int samples = 2000;
    bool all_ones = false;
};

int cmd_ksz(const CommonFlags& flags, const KszFlags& kf) {
    auto r = ml::ksz_demo(kf.n, kf.trials, kf.samples, flags.seed, kf.all_ones);
    Row row;
    row.digest = fnv_digest(std::to_string(kf.n) + "/" + std::to_string(flags.seed));
    row.scheme = "ksz";
    row.dim = kf.n;
    row.value = Complex{r.vnorm_lower, 0.0};
    row.expected = Complex{r.sup_estimate, 0.0};
    row.budget = r.l1_upper;
    Report report;
    report.command = "ksz";
    report.rows.push_back(row);
    return emit(report, flags.format, flags.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "dg: certified spectral pairings on dyadic groups.\n"
        "Report columns: case,digest,scheme,dim,levels,value_re,value_im,"
        "expected_re,expected_im,defect,budget,pass (pass = defect <= budget).\n"
        "The first output line is a timestamp comment; everything below it is\n"
        "a deterministic function of (command, seed, flags). DG_THREADS caps\n"
        "the worker pool. Exit codes: 0 all checks pass, 2 check failure,\n"
        "3 configuration error."};
    app.require_subcommand(1);

    CommonFlags common;

    auto* constants_cmd = app.add_subcommand("constants", "print the scheme constants");
    common.attach(constants_cmd);

    ParsevalFlags pf;
    auto* parseval_cmd =
        app.add_subcommand("verify-parseval", "pair random vectors against the dot product");
    common.attach(parseval_cmd);
    parseval_cmd->add_option("--dim", pf.dim, "vector dimension (= support)");
    parseval_cmd->add_option("--levels", pf.levels, "recursion depth J");
    parseval_cmd->add_option("--trials", pf.trials, "number of seeded cases");
    parseval_cmd->add_option("--scheme", pf.scheme, "phi or phi2")
        ->check(CLI::IsMember({"phi", "phi2"}));
    parseval_cmd->add_option("--t", pf.t, "t parameter of the phi2 scheme");
    parseval_cmd->add_option("--mode", pf.mode, "exact or truncated")
        ->check(CLI::IsMember({"exact", "truncated"}));
    parseval_cmd->add_option("--prune-eps", pf.prune_eps, "override the pruning threshold");
    parseval_cmd->add_option("--order-cap", pf.order_cap, "odd expansion order cap");
    parseval_cmd->add_flag("--complex", pf.complex_vectors, "draw complex vectors");

    LpFlags lf;
    auto* lp_cmd =
        app.add_subcommand("verify-lp-pairing", "pair lp vectors against lq partners");
    common.attach(lp_cmd);
    lp_cmd->add_option("--p", lf.p, "exponent: 1, 1.5, 2, 3, ... or inf");
    lp_cmd->add_option("--dim", lf.dim, "vector dimension");
    lp_cmd->add_option("--trials", lf.trials, "number of seeded cases");
    lp_cmd->add_option("--levels", lf.levels, "recursion depth J");

    MultiFlags mf;
    auto* multi_cmd = app.add_subcommand(
        "verify-multilinear", "fractional convolutions and k-fold spectral pairings");
    common.attach(multi_cmd);
    multi_cmd->add_option("--alphabet", mf.alphabet, "alphabet size (2 or 3)");
    multi_cmd->add_option("--trials", mf.trials, "cases per part");
    multi_cmd->add_option("--k", mf.ks, "k values for the spectral part");
    multi_cmd->add_option("--levels", mf.levels, "recursion depth J");

    std::string alpha_arg;
    auto* alpha_cmd = app.add_subcommand("alpha", "packing value of a covering sequence");
    alpha_cmd->add_option("sequence", alpha_arg, "e.g. \"1,2;2,3;1,3\"")->required();

    std::string sf_arg;
    auto* sf_cmd = app.add_subcommand("standard-form", "reduce a covering sequence");
    sf_cmd->add_option("sequence", sf_arg, "e.g. \"1,2;1;2\"")->required();

    PsiFlags psif;
    auto* psi_cmd = app.add_subcommand("psi", "combinatorial gauge of a built-in point set");
    common.attach(psi_cmd);
    psi_cmd->add_option("--family", psif.family, "three-halves, full or diagonal");
    psi_cmd->add_option("--k", psif.k, "alphabet size of the family");
    psi_cmd->add_option("--s", psif.s, "window size per axis");
    psi_cmd->add_flag("--witness", psif.witness, "greedy lower-bound mode");

    KszFlags kf;
    auto* ksz_cmd = app.add_subcommand("ksz", "random-sign trilinear sup experiment");
    common.attach(ksz_cmd);
    ksz_cmd->add_option("--n", kf.n, "side length N (<= 12)");
    ksz_cmd->add_option("--trials", kf.trials, "independent sign draws");
    ksz_cmd->add_option("--samples", kf.samples, "sign-vector samples per draw");
    ksz_cmd->add_flag("--all-ones", kf.all_ones, "use the deterministic all-ones signs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (constants_cmd->parsed()) return cmd_constants(common);
        if (parseval_cmd->parsed()) return cmd_verify_parseval(common, pf);
        if (lp_cmd->parsed()) return cmd_verify_lp_pairing(common, lf);
        if (multi_cmd->parsed()) return cmd_verify_multilinear(common, mf);
        if (alpha_cmd->parsed()) {
            std::cout << ml::alpha_lp(ml::CoveringSequence::parse(alpha_arg)).to_string()
                      << "\n";
            return 0;
        }
        if (sf_cmd->parsed()) {
            std::cout << ml::standard_form(ml::CoveringSequence::parse(sf_arg)).to_string()
                      << "\n";
            return 0;
        }
        if (psi_cmd->parsed()) return cmd_psi(common, psif);
        if (ksz_cmd->parsed()) return cmd_ksz(common, kf);
    } catch (const dg::Error& e) {
        json err = {{"error", e.what()}};
        std::cout << err.dump() << "\n";
        return 3;
    }
    return 3;
}
