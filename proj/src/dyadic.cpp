#include "dg/dyadic.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>

#include "dg/rng.hpp"

namespace dg {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::vector<GeneratorId>& ids) {
    std::uint64_t h = kFnvOffset;
    for (GeneratorId id : ids) {
        for (int b = 0; b < 4; ++b) {
            h ^= (id >> (8 * b)) & 0xFF;
            h *= kFnvPrime;
        }
    }
    return h;
}

}  // namespace

Character::Character(std::vector<GeneratorId> gens) : gens_(std::move(gens)) {
    std::sort(gens_.begin(), gens_.end());
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
    rehash();
}

void Character::rehash() { hash_ = fnv1a(gens_); }

Character char_mul(const Character& a, const Character& b) {
    std::vector<GeneratorId> out;
    out.reserve(a.gens().size() + b.gens().size());
    std::set_symmetric_difference(a.gens().begin(), a.gens().end(), b.gens().begin(),
                                  b.gens().end(), std::back_inserter(out));
    return Character(std::move(out));
}

void SignVector::set(GeneratorId g, int sign) {
    if (sign < 0) {
        neg_.insert(g);
    } else {
        neg_.erase(g);
    }
}

int SignVector::eval(const Character& w) const {
    int parity = 0;
    for (GeneratorId g : w.gens()) parity ^= neg_.count(g) ? 1 : 0;
    return parity ? -1 : 1;
}

WalshSeries WalshSeries::monomial(Character w, Complex c, std::uint64_t session) {
    WalshSeries s(session);
    s.add_term(w, c);
    return s;
}

void WalshSeries::add_term(const Character& w, Complex c) {
    if (c == Complex{0.0, 0.0}) return;
    auto [it, inserted] = coeffs_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex{0.0, 0.0}) coeffs_.erase(it);
    }
}

Complex WalshSeries::coeff(const Character& w) const {
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? Complex{0.0, 0.0} : it->second;
}

double WalshSeries::l1_norm() const {
    double s = 0.0;
    for (const auto& [w, c] : coeffs_) s += std::abs(c);
    return s;
}

double WalshSeries::l2_norm() const {
    double s = 0.0;
    for (const auto& [w, c] : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

void WalshSeries::note_dropped(double l1, double l2) {
    dropped_l1_ += l1;
    dropped_l2_ += l2;
}

void WalshSeries::prune(double eps) {
    if (eps <= 0.0) return;
    double p1 = 0.0, p2 = 0.0;
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        double a = std::abs(it->second);
        if (a < eps) {
            p1 += a;
            p2 += a * a;
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
    if (p1 > 0.0) note_dropped(p1, std::sqrt(p2));
}

std::vector<std::pair<Character, Complex>> WalshSeries::sorted_terms() const {
    std::vector<std::pair<Character, Complex>> v(coeffs_.begin(), coeffs_.end());
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

namespace {

std::uint64_t merge_sessions(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b != 0 && a != b) throw SessionMismatch();
    return a != 0 ? a : b;
}

}  // namespace

WalshSeries series_linear(const std::vector<std::pair<Complex, const WalshSeries*>>& ops) {
    WalshSeries out;
    std::uint64_t session = 0;
    double d1 = 0.0, d2 = 0.0;
    for (const auto& [scalar, f] : ops) {
        session = merge_sessions(session, f->session());
        double a = std::abs(scalar);
        d1 += a * f->dropped_l1();
        d2 += a * f->dropped_l2();
        if (scalar == Complex{0.0, 0.0}) continue;
        for (const auto& [w, c] : f->coeffs()) out.add_term(w, scalar * c);
    }
    out.set_session(session);
    out.note_dropped(d1, d2);
    return out;
}

WalshSeries series_mul(const WalshSeries& f, const WalshSeries& g, double prune_eps) {
    WalshSeries out(merge_sessions(f.session(), g.session()));
    for (const auto& [wf, cf] : f.coeffs()) {
        for (const auto& [wg, cg] : g.coeffs()) {
            out.add_term(char_mul(wf, wg), cf * cg);
        }
    }
    out.prune(prune_eps);
    // incoming pruned mass propagates through the l1 algebra bound
    double cross1 = f.l1_norm() * g.dropped_l1() + f.dropped_l1() * g.l1_norm() +
                    f.dropped_l1() * g.dropped_l1();
    if (cross1 > 0.0) out.note_dropped(cross1, cross1);
    return out;
}

Complex evaluate(const WalshSeries& f, const SignVector& omega) {
    Complex v{0.0, 0.0};
    for (const auto& [w, c] : f.coeffs()) v += c * static_cast<double>(omega.eval(w));
    return v;
}

Complex parseval_pair(const WalshSeries& f, const WalshSeries& g) {
    merge_sessions(f.session(), g.session());
    const WalshSeries& small = f.term_count() <= g.term_count() ? f : g;
    const WalshSeries& large = f.term_count() <= g.term_count() ? g : f;
    Complex v{0.0, 0.0};
    for (const auto& [w, c] : small.sorted_terms()) v += c * large.coeff(w);
    return v;
}

WalshSeries conj_series(const WalshSeries& f) {
    WalshSeries out(f.session());
    for (const auto& [w, c] : f.coeffs()) out.add_term(w, std::conj(c));
    out.note_dropped(f.dropped_l1(), f.dropped_l2());
    return out;
}

namespace {

using Point = std::complex<double>;

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

// Andrew monotone chain; collinear points collapse to hull endpoints.
std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<Point> minkowski_sum_hull(const std::vector<Point>& a, const std::vector<Point>& b) {
    std::vector<Point> sums;
    sums.reserve(a.size() * b.size());
    for (const Point& p : a)
        for (const Point& q : b) sums.push_back(p + q);
    return convex_hull(std::move(sums));
}

struct DisjointSet {
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

}  // namespace

SupBounds sup_norm(const WalshSeries& f, SupMode mode, std::uint64_t budget, int bit_cap,
                   std::uint64_t seed) {
    auto terms = f.sorted_terms();

    if (mode == SupMode::sampled) {
        // collect active generators
        std::vector<GeneratorId> gens;
        for (const auto& [w, c] : terms)
            gens.insert(gens.end(), w.gens().begin(), w.gens().end());
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        double lower = 0.0;
        CounterRng rng(seed);
        for (std::uint64_t s = 0; s < budget; ++s) {
            SignVector omega;
            for (GeneratorId g : gens) omega.set(g, rng.sign());
            lower = std::max(lower, std::abs(evaluate(f, omega)));
        }
        return {lower, f.l1_norm() + f.dropped_l1()};
    }

    // exact mode: split generators into independent components
    Complex constant{0.0, 0.0};
    std::vector<GeneratorId> gens;
    for (const auto& [w, c] : terms) {
        if (w.is_identity()) {
            constant = c;
            continue;
        }
        gens.insert(gens.end(), w.gens().begin(), w.gens().end());
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

    std::unordered_map<GeneratorId, std::size_t> index;
    for (std::size_t i = 0; i < gens.size(); ++i) index[gens[i]] = i;

    DisjointSet ds(gens.size());
    for (const auto& [w, c] : terms) {
        for (std::size_t i = 1; i < w.gens().size(); ++i)
            ds.unite(index[w.gens()[0]], index[w.gens()[i]]);
    }

    std::map<std::size_t, std::vector<std::size_t>> component_terms;  // root -> term indices
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (terms[t].first.is_identity()) continue;
        component_terms[ds.find(index[terms[t].first.gens()[0]])].push_back(t);
    }

    std::vector<Point> poly{constant};
    for (const auto& [root, tidx] : component_terms) {
        std::vector<GeneratorId> cgens;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (ds.find(i) == root) cgens.push_back(gens[i]);
        if (static_cast<int>(cgens.size()) > bit_cap)
            throw CapExceeded("sup_norm exact: component of " + std::to_string(cgens.size()) +
                              " generators exceeds bit cap " + std::to_string(bit_cap));
        std::unordered_map<GeneratorId, int> bit;
        for (std::size_t i = 0; i < cgens.size(); ++i) bit[cgens[i]] = static_cast<int>(i);
        std::vector<std::uint32_t> masks(tidx.size());
        std::vector<Complex> coeffs(tidx.size());
        for (std::size_t j = 0; j < tidx.size(); ++j) {
            const auto& [w, c] = terms[tidx[j]];
            std::uint32_t m = 0;
            for (GeneratorId g : w.gens()) m |= 1u << bit[g];
            masks[j] = m;
            coeffs[j] = c;
        }
        std::vector<Point> values;
        values.reserve(std::size_t{1} << cgens.size());
        for (std::uint32_t assign = 0; assign < (1u << cgens.size()); ++assign) {
            Complex v{0.0, 0.0};
            for (std::size_t j = 0; j < masks.size(); ++j) {
                v += (std::popcount(assign & masks[j]) & 1) ? -coeffs[j] : coeffs[j];
            }
            values.push_back(v);
        }
        poly = minkowski_sum_hull(poly, convex_hull(std::move(values)));
    }

    double best = 0.0;
    for (const Point& p : poly) best = std::max(best, std::abs(p));
    return {best, best};
}

namespace {
std::atomic<std::uint64_t> g_session_counter{1};
}

Session::Session() : id_(g_session_counter.fetch_add(1)) {}

GeneratorId Session::fresh(int block) {
    GeneratorId g = next_++;
    block_of_.push_back(block);
    return g;
}

GeneratorId Session::tau0(std::uint64_t coord) {
    auto it = tau0_.find(coord);
    if (it != tau0_.end()) return it->second;
    GeneratorId g = fresh(1);
    tau0_.emplace(coord, g);
    return g;
}

GeneratorId Session::tau(int level, const Character& w) {
    if (level < 1) throw ConfigError("tau level must be >= 1");
    if (w.order() < 3 || w.order() % 2 == 0)
        throw ConfigError("tau domain is odd characters of order >= 3");
    if (static_cast<std::size_t>(level) >= tau_.size()) tau_.resize(level + 1);
    auto& memo = tau_[level];
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    GeneratorId g = fresh(level + 1);
    memo.emplace(w, g);
    return g;
}

int Session::block_of(GeneratorId g) const {
    return g < block_of_.size() ? block_of_[g] : 0;
}

}  // namespace dg
