#include "dg/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dg {

void CoordVector::set(CoordKey k, Complex v) {
    if (v == Complex{0.0, 0.0}) {
        entries_.erase(k);
    } else {
        entries_[k] = v;
    }
}

Complex CoordVector::at(CoordKey k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? Complex{0.0, 0.0} : it->second;
}

double CoordVector::norm1() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += std::abs(v);
    return s;
}

double CoordVector::norm2() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += std::norm(v);
    return std::sqrt(s);
}

double CoordVector::norm_inf() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s = std::max(s, std::abs(v));
    return s;
}

double CoordVector::norm_p(double p) const {
    if (std::isinf(p)) return norm_inf();
    if (p < 1.0) throw ConfigError("norm_p requires p >= 1");
    if (p == 1.0) return norm1();
    if (p == 2.0) return norm2();
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

bool CoordVector::is_real() const {
    for (const auto& [k, v] : entries_)
        if (v.imag() != 0.0) return false;
    return true;
}

CoordVector CoordVector::real_part() const {
    CoordVector out;
    for (const auto& [k, v] : entries_) out.set(k, Complex{v.real(), 0.0});
    return out;
}

CoordVector CoordVector::imag_part() const {
    CoordVector out;
    for (const auto& [k, v] : entries_) out.set(k, Complex{v.imag(), 0.0});
    return out;
}

CoordVector CoordVector::conj() const {
    CoordVector out;
    for (const auto& [k, v] : entries_) out.set(k, std::conj(v));
    return out;
}

CoordVector CoordVector::scaled(Complex factor) const {
    CoordVector out;
    for (const auto& [k, v] : entries_) out.set(k, factor * v);
    return out;
}

CoordVector operator-(const CoordVector& a, const CoordVector& b) {
    CoordVector out = a;
    for (const auto& [k, v] : b.entries()) out.set(k, out.at(k) - v);
    return out;
}

Complex dot_conj(const CoordVector& x, const CoordVector& y) {
    Complex s{0.0, 0.0};
    for (const auto& [k, v] : x.entries()) s += v * std::conj(y.at(k));
    return s;
}

Complex dot_plain(const CoordVector& x, const CoordVector& y) {
    Complex s{0.0, 0.0};
    for (const auto& [k, v] : x.entries()) s += v * y.at(k);
    return s;
}

namespace riesz {
namespace {

enum class Kind { q, p, r };

// per-order coefficient and mass factors of the three expansions:
//   q: coeff sign (-1)^((o-1)/2), unit magnitude factor
//   p: coeff factor 4^{-(o-1)/2} = 2^{1-o}
//   r: plain subset products, all orders
double coeff_factor(Kind kind, int order) {
    switch (kind) {
        case Kind::q:
            return ((order - 1) / 2) % 2 ? -1.0 : 1.0;
        case Kind::p:
            return std::ldexp(1.0, 1 - order);
        case Kind::r:
            return 1.0;
    }
    return 1.0;
}

bool order_admissible(Kind kind, int order) {
    if (kind == Kind::r) return order >= 0;
    return order >= 1 && order % 2 == 1;
}

// retained-term ceiling: a sparse engine should refuse, not swap
constexpr std::size_t kTermCap = std::size_t{1} << 21;

struct Expander {
    Kind kind;
    int max_order;  // enumeration depth, <= support size
    double prune_eps;
    std::vector<double> vals;          // support values, sorted by |v| descending
    std::vector<GeneratorId> gen_ids;  // matching generators
    WalshSeries out;

    // exact l1/l2 books for the pruned mass
    double pruned1 = 0.0;
    long double pruned2 = 0.0L;

    // suffix elementary symmetric sums: e1[i][k] over |v_i|..|v_{n-1}|,
    // e2 over the squares; used to account skipped subtrees exactly
    std::vector<std::vector<double>> suffix_e1, suffix_e2;

    void prepare_suffix_sums() {
        std::size_t n = vals.size();
        suffix_e1.assign(n + 1, std::vector<double>(max_order + 1, 0.0));
        suffix_e2.assign(n + 1, std::vector<double>(max_order + 1, 0.0));
        suffix_e1[n][0] = suffix_e2[n][0] = 1.0;
        for (std::size_t i = n; i-- > 0;) {
            double a = std::abs(vals[i]);
            for (int k = 0; k <= max_order; ++k) {
                suffix_e1[i][k] = suffix_e1[i + 1][k];
                suffix_e2[i][k] = suffix_e2[i + 1][k];
                if (k > 0) {
                    suffix_e1[i][k] += a * suffix_e1[i + 1][k - 1];
                    suffix_e2[i][k] += a * a * suffix_e2[i + 1][k - 1];
                }
            }
        }
    }

    void account_skipped(std::size_t i, int size, double prod) {
        for (int k = 1; size + k <= max_order; ++k) {
            if (!order_admissible(kind, size + k)) continue;
            double f = std::abs(coeff_factor(kind, size + k));
            pruned1 += f * std::abs(prod) * suffix_e1[i][k];
            pruned2 += static_cast<long double>(f * f) * prod * prod * suffix_e2[i][k];
        }
    }

    void emit(const std::vector<GeneratorId>& cur, int size, double prod) {
        double c = coeff_factor(kind, size) * prod;
        if (std::abs(c) < prune_eps) {
            pruned1 += std::abs(c);
            pruned2 += static_cast<long double>(c) * c;
            return;
        }
        out.add_term(Character(cur), Complex{c, 0.0});
        if (out.term_count() > kTermCap)
            throw CapExceeded("expansion exceeds the sparse-term work cap");
    }

    void dfs(std::size_t start, int size, double prod, std::vector<GeneratorId>& cur) {
        if (size == max_order) return;
        for (std::size_t i = start; i < vals.size(); ++i) {
            if (prune_eps > 0.0) {
                double grow = std::max(1.0, std::abs(vals[i]));
                double bound =
                    std::abs(prod * vals[i]) * std::pow(grow, max_order - size - 1);
                if (bound < prune_eps) {
                    account_skipped(i, size, prod);
                    return;
                }
            }
            cur.push_back(gen_ids[i]);
            double next = prod * vals[i];
            if (order_admissible(kind, size + 1)) emit(cur, size + 1, next);
            dfs(i + 1, size + 1, next, cur);
            cur.pop_back();
        }
    }
};

// certified mass of the orders the cap excluded, per the (2k+1)! bounds
std::pair<double, double> cap_tail(Kind kind, int order_cap, double n1, double n2) {
    long double t1 = 0.0L, t2sq = 0.0L;
    long double fact = 1.0L;
    for (int k = 1; k <= order_cap + 2 + 400; ++k) {
        fact *= k;
        if (k <= order_cap || k % 2 == 0) continue;
        double f = std::abs(coeff_factor(kind, k));
        long double term1 = f * std::pow(static_cast<long double>(n1), k) / fact;
        long double term2 = f * f * std::pow(static_cast<long double>(n2), 2 * k) / fact;
        t1 += term1;
        t2sq += term2;
        if (term1 < 1e-300L && term2 < 1e-300L && k > order_cap + 4) break;
    }
    return {static_cast<double>(t1), static_cast<double>(t2sq)};
}

WalshSeries expand(Kind kind, const CoordVector& x, const GenMap& gens, int order_cap,
                   double prune_eps, std::uint64_t session) {
    if (!x.is_real()) throw NotReal();
    if (prune_eps < 0.0) throw ConfigError("prune_eps must be >= 0");
    if (kind != Kind::r && order_cap != kUnbounded && (order_cap < 1 || order_cap % 2 == 0))
        throw ConfigError("order_cap must be odd or unbounded");
    if (kind != Kind::q && x.norm_inf() > 1.0 + 1e-12)
        throw SupNormExceeded("riesz product base requires |x|_inf <= 1");

    Expander e;
    e.kind = kind;
    e.prune_eps = prune_eps;
    e.out.set_session(session);

    std::size_t n = x.nu();
    int effective_cap = (kind == Kind::r || order_cap == kUnbounded)
                            ? static_cast<int>(n)
                            : order_cap;
    e.max_order = std::min<int>(effective_cap, static_cast<int>(n));

    std::vector<std::pair<double, CoordKey>> support;
    support.reserve(n);
    for (const auto& [k, v] : x.entries()) {
        auto it = gens.find(k);
        if (it == gens.end()) throw ConfigError("generator map does not cover the support");
        support.emplace_back(v.real(), k);
    }
    std::stable_sort(support.begin(), support.end(), [](const auto& a, const auto& b) {
        return std::abs(a.first) > std::abs(b.first);
    });
    for (const auto& [v, k] : support) {
        e.vals.push_back(v);
        e.gen_ids.push_back(gens.at(k));
    }

    if (kind == Kind::r) e.out.add_term(Character::identity(), Complex{1.0, 0.0});

    if (n > 0 && e.max_order > 0) {
        e.prepare_suffix_sums();
        std::vector<GeneratorId> cur;
        cur.reserve(e.max_order);
        e.dfs(0, 0, 1.0, cur);
    }

    double tail1 = 0.0, tail2sq = 0.0;
    if (kind != Kind::r && e.max_order < static_cast<int>(n)) {
        std::tie(tail1, tail2sq) = cap_tail(kind, e.max_order, x.norm1(), x.norm2());
    }
    double d2 = std::sqrt(static_cast<double>(e.pruned2) + tail2sq);
    double d1 = e.pruned1 + tail1;
    if (d1 > 0.0 || d2 > 0.0) e.out.note_dropped(d1, d2);
    return e.out;
}

}  // namespace

WalshSeries q_series(const CoordVector& x, const GenMap& gens, int order_cap, double prune_eps,
                     std::uint64_t session) {
    return expand(Kind::q, x, gens, order_cap, prune_eps, session);
}

WalshSeries p_series(const CoordVector& x, const GenMap& gens, int order_cap, double prune_eps,
                     std::uint64_t session) {
    return expand(Kind::p, x, gens, order_cap, prune_eps, session);
}

WalshSeries riesz_product_series(const CoordVector& x, const GenMap& gens, double prune_eps,
                                 std::uint64_t session) {
    return expand(Kind::r, x, gens, kUnbounded, prune_eps, session);
}

double q_tail_l2(const CoordVector& x) {
    double s = x.norm2() * x.norm2();
    return std::sqrt(std::max(0.0, std::sinh(s) - s));
}

double q_sup_bound(const CoordVector& x) {
    double s = x.norm2();
    return std::exp(0.5 * s * s);
}

double q_l1_spectral_bound(const CoordVector& x) { return std::sinh(x.norm1()); }

double lipschitz_bound(const CoordVector& x, const CoordVector& y) {
    double rho = std::max(x.norm2(), y.norm2());
    return std::sqrt(2.0 * std::cosh(2.0 * rho * rho)) * (x - y).norm2();
}

}  // namespace riesz
}  // namespace dg
