#include "dg/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "dg/rng.hpp"

namespace dg::multilinear {

namespace {
using BigRat = boost::multiprecision::cpp_rational;
}

CoveringSequence CoveringSequence::parse(const std::string& text) {
    CoveringSequence u;
    std::stringstream outer(text);
    std::string set_text;
    while (std::getline(outer, set_text, ';')) {
        std::vector<int> set;
        std::stringstream inner(set_text);
        std::string item;
        while (std::getline(inner, item, ',')) {
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(item, &pos);
            } catch (const std::exception&) {
                throw ConfigError("covering sequence: bad element '" + item + "'");
            }
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size() || v < 1)
                throw ConfigError("covering sequence: bad element '" + item + "'");
            set.push_back(v);
        }
        if (set.empty()) throw ConfigError("covering sequence: empty set");
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        u.sets.push_back(std::move(set));
        u.m = std::max(u.m, u.sets.back().back());
    }
    if (u.sets.empty()) throw ConfigError("covering sequence: no sets");
    std::vector<bool> covered(u.m + 1, false);
    for (const auto& s : u.sets)
        for (int j : s) covered[j] = true;
    for (int j = 1; j <= u.m; ++j)
        if (!covered[j]) throw ConfigError("covering sequence: coordinate " + std::to_string(j) +
                                           " is uncovered");
    return u;
}

std::string CoveringSequence::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (i) out += ';';
        for (std::size_t k = 0; k < sets[i].size(); ++k) {
            if (k) out += ',';
            out += std::to_string(sets[i][k]);
        }
    }
    return out;
}

std::vector<int> CoveringSequence::incidence() const {
    std::vector<int> k(m, 0);
    for (const auto& s : sets)
        for (int j : s) ++k[j - 1];
    return k;
}

int CoveringSequence::min_incidence() const {
    auto k = incidence();
    return *std::min_element(k.begin(), k.end());
}

int CoveringSequence::beta() const {
    int b = 0;
    for (const auto& s : sets) b += static_cast<int>(s.size());
    return b;
}

std::string Rational::to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational alpha_lp(const CoveringSequence& u) {
    const int m = u.m;
    const int n = static_cast<int>(u.sets.size());
    if (m > 12 || n > 12) throw DimensionCap("alpha_lp caps m and n at 12");

    // maximize sum v_j, incidence-matrix rows <= 1, v >= 0; slack basis is
    // feasible, Bland's rule terminates; everything stays rational
    const int cols = m + n + 1;
    std::vector<std::vector<BigRat>> tab(n, std::vector<BigRat>(cols, 0));
    std::vector<BigRat> obj(cols, 0);
    std::vector<int> basis(n);
    for (int i = 0; i < n; ++i) {
        for (int j : u.sets[i]) tab[i][j - 1] = 1;
        tab[i][m + i] = 1;
        tab[i][cols - 1] = 1;
        basis[i] = m + i;
    }
    for (int j = 0; j < m; ++j) obj[j] = -1;

    for (;;) {
        int enter = -1;
        for (int j = 0; j < m + n; ++j) {
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        BigRat best = 0;
        for (int i = 0; i < n; ++i) {
            if (tab[i][enter] <= 0) continue;
            BigRat ratio = tab[i][cols - 1] / tab[i][enter];
            if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) throw Error("alpha_lp: unbounded program");
        BigRat pivot = tab[leave][enter];
        for (int j = 0; j < cols; ++j) tab[leave][j] /= pivot;
        for (int i = 0; i < n; ++i) {
            if (i == leave || tab[i][enter] == 0) continue;
            BigRat f = tab[i][enter];
            for (int j = 0; j < cols; ++j) tab[i][j] -= f * tab[leave][j];
        }
        BigRat f = obj[enter];
        if (f != 0)
            for (int j = 0; j < cols; ++j) obj[j] -= f * tab[leave][j];
        basis[leave] = enter;
    }

    BigRat value = obj[cols - 1];
    Rational out;
    out.num = static_cast<std::int64_t>(boost::multiprecision::numerator(value));
    out.den = static_cast<std::int64_t>(boost::multiprecision::denominator(value));
    return out;
}

CoveringSequence standard_form(const CoveringSequence& u) {
    std::vector<std::vector<int>> sets = u.sets;

    // absorb strict subsets into their largest superset, to a fixed point
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& s : sets) {
            const std::vector<int>* best = nullptr;
            for (const auto& t : sets) {
                if (t.size() <= s.size()) continue;
                if (std::includes(t.begin(), t.end(), s.begin(), s.end()) &&
                    (!best || t.size() > best->size() || (t.size() == best->size() && t < *best)))
                    best = &t;
            }
            if (best) {
                s = *best;
                changed = true;
            }
        }
    }

    // membership signature of each coordinate across the absorbed sets
    std::map<std::vector<bool>, int> signature_class;
    std::vector<int> label(u.m + 1, 0);
    int classes = 0;
    for (int j = 1; j <= u.m; ++j) {
        std::vector<bool> sig;
        sig.reserve(sets.size());
        for (const auto& s : sets) sig.push_back(std::binary_search(s.begin(), s.end(), j));
        auto [it, inserted] = signature_class.emplace(sig, classes + 1);
        if (inserted) ++classes;
        label[j] = it->second;
    }
    // relabel classes in order of their smallest member
    std::vector<int> order(classes + 1, 0);
    int next = 0;
    for (int j = 1; j <= u.m; ++j)
        if (order[label[j]] == 0) order[label[j]] = ++next;

    CoveringSequence out;
    out.m = classes;
    for (const auto& s : sets) {
        std::set<int> relabeled;
        for (int j : s) relabeled.insert(order[label[j]]);
        out.sets.emplace_back(relabeled.begin(), relabeled.end());
    }
    return out;
}

std::uint64_t pack_index(const std::vector<int>& tuple, int alphabet) {
    std::uint64_t idx = 0;
    for (int digit : tuple) idx = idx * static_cast<std::uint64_t>(alphabet) + digit;
    return idx;
}

Theta Theta::constant(int m, int alphabet, Complex value) {
    Theta t;
    t.m = m;
    t.alphabet = alphabet;
    std::uint64_t size = 1;
    for (int i = 0; i < m; ++i) size *= alphabet;
    t.values.assign(size, value);
    return t;
}

Complex Theta::at(const std::vector<int>& tuple) const {
    return values[pack_index(tuple, alphabet)];
}

Complex eta_bruteforce(const CoveringSequence& u, const Theta& theta,
                       const std::vector<CoordVector>& args, std::uint64_t work_cap) {
    if (theta.m != u.m) throw ConfigError("eta_bruteforce: theta rank mismatch");
    if (args.size() != u.sets.size()) throw ConfigError("eta_bruteforce: argument count mismatch");
    const int a = theta.alphabet;
    std::uint64_t total = 1;
    for (int j = 0; j < u.m; ++j) {
        total *= static_cast<std::uint64_t>(a);
        if (total > work_cap) throw WorkCap("eta_bruteforce: alphabet^m exceeds the work cap");
    }

    std::vector<int> tuple(u.m, 0);
    std::vector<int> proj;
    Complex sum{0.0, 0.0};
    for (std::uint64_t it = 0; it < total; ++it) {
        Complex term = theta.values[it];
        for (std::size_t i = 0; i < u.sets.size() && term != Complex{0.0, 0.0}; ++i) {
            proj.clear();
            for (int j : u.sets[i]) proj.push_back(tuple[j - 1]);
            term *= args[i].at(pack_index(proj, a));
        }
        sum += term;
        for (int j = u.m - 1; j >= 0; --j) {
            if (++tuple[j] < a) break;
            tuple[j] = 0;
        }
    }
    return sum;
}

std::size_t SlotTable::total_bits() const {
    std::size_t b = 0;
    for (const auto& s : slots) b += s.gens.size();
    return b;
}

double SlotTable::sup() const {
    double m = 0.0;
    for (const Complex& v : values) m = std::max(m, std::abs(v));
    return m;
}

SlotTable build_phi_tuple(const CoordVector& x, int alphabet, const std::vector<int>& k_tuple,
                          const std::vector<Session*>& sessions, const phi::PhiConfig& cfg) {
    const int l = static_cast<int>(k_tuple.size());
    if (l < 1 || l > 3) throw ConfigError("build_phi_tuple supports 1 <= l <= 3");
    if (sessions.size() != k_tuple.size())
        throw ConfigError("build_phi_tuple: one session per slot required");
    if (alphabet < 1) throw ConfigError("build_phi_tuple: alphabet must be positive");

    std::uint64_t block = 1;
    for (int i = 0; i < l; ++i) block *= alphabet;

    std::vector<Complex> values(block, Complex{0.0, 0.0});
    for (const auto& [k, v] : x.entries()) {
        if (k >= block) throw ConfigError("build_phi_tuple: key outside alphabet^l");
        values[k] = v;
    }

    SlotTable table;
    table.exact = true;
    std::size_t bits = 0;

    for (int s = 1; s <= l; ++s) {
        std::uint64_t tail = 1;
        for (int i = 0; i < l - s; ++i) tail *= alphabet;
        const std::uint64_t lead_block = tail * alphabet;
        const std::uint64_t widths = std::uint64_t{1} << bits;

        std::vector<WalshSeries> built;
        built.reserve(widths * tail);
        for (std::uint64_t w = 0; w < widths; ++w) {
            for (std::uint64_t beta = 0; beta < tail; ++beta) {
                CoordVector slice;
                for (int a = 0; a < alphabet; ++a)
                    slice.set(static_cast<CoordKey>(a),
                              values[w * lead_block + a * tail + beta]);
                phi::PhiSeries ps =
                    phi::build_phi_k(slice, k_tuple[s - 1], *sessions[s - 1], cfg);
                if (!ps.certificate.exact || ps.certificate.telescope_remainder != 0.0)
                    table.exact = false;
                built.push_back(ps.assembled());
            }
        }

        std::set<GeneratorId> gen_set;
        for (const auto& f : built)
            for (const auto& [w, c] : f.coeffs())
                for (GeneratorId g : w.gens()) gen_set.insert(g);
        SlotTable::Slot slot;
        slot.session = sessions[s - 1]->id();
        slot.gens.assign(gen_set.begin(), gen_set.end());
        const std::size_t g = slot.gens.size();
        if (bits + g > 24) throw CapExceeded("build_phi_tuple: table exceeds 24 bits");

        std::vector<Complex> next(widths * (std::uint64_t{1} << g) * tail);
        for (std::uint64_t w = 0; w < widths; ++w) {
            for (std::uint64_t beta = 0; beta < tail; ++beta) {
                const WalshSeries& f = built[w * tail + beta];
                for (std::uint64_t a = 0; a < (std::uint64_t{1} << g); ++a) {
                    SignVector omega;
                    for (std::size_t b = 0; b < g; ++b)
                        if (a & (std::uint64_t{1} << b)) omega.set(slot.gens[b], -1);
                    next[((a << bits) + w) * tail + beta] = evaluate(f, omega);
                }
            }
        }
        values = std::move(next);
        bits += g;
        table.slots.push_back(std::move(slot));
    }

    table.values = std::move(values);
    table.sup_bound = std::pow(phi::constants().K_complex, l) * x.norm2();
    return table;
}

namespace {

std::uint32_t gather_bits(std::uint32_t global_mask, const std::vector<int>& src_bit) {
    std::uint32_t local = 0;
    for (std::size_t b = 0; b < src_bit.size(); ++b)
        if (global_mask & (1u << src_bit[b])) local |= 1u << b;
    return local;
}

}  // namespace

Complex frac_convolution(const CoveringSequence& u, const std::vector<SlotTable>& tables,
                         int bit_cap) {
    const int n = static_cast<int>(u.sets.size());
    if (static_cast<int>(tables.size()) != n)
        throw RegistryMismatch("frac_convolution: one table per sequence element required");
    for (int i = 0; i < n; ++i)
        if (tables[i].slots.size() != u.sets[i].size())
            throw RegistryMismatch("frac_convolution: table slot count mismatch");

    struct Coord {
        std::vector<std::pair<int, int>> occ;  // (table index, local slot), ascending i
        std::vector<GeneratorId> gens;         // union over the occurrences
        int bit_offset = 0;                    // start of the free-copy fields
    };
    std::vector<Coord> coords(u.m);
    for (int i = 0; i < n; ++i) {
        for (std::size_t pos = 0; pos < u.sets[i].size(); ++pos) {
            coords[u.sets[i][pos] - 1].occ.emplace_back(i, static_cast<int>(pos));
        }
    }

    int bits = 0;
    for (int j = 0; j < u.m; ++j) {
        Coord& c = coords[j];
        std::set<GeneratorId> gens;
        std::uint64_t session = 0;
        for (auto [i, pos] : c.occ) {
            const auto& slot = tables[i].slots[pos];
            if (session == 0) session = slot.session;
            if (slot.session != session)
                throw RegistryMismatch("frac_convolution: coordinate " + std::to_string(j + 1) +
                                       " mixes sessions");
            gens.insert(slot.gens.begin(), slot.gens.end());
        }
        c.gens.assign(gens.begin(), gens.end());
        c.bit_offset = bits;
        bits += static_cast<int>(c.gens.size()) * (static_cast<int>(c.occ.size()) - 1);
    }
    if (bits > bit_cap) throw CapExceeded("frac_convolution: " + std::to_string(bits) +
                                          " integration bits exceed the cap");

    // per (table, slot): where each of its generator bits sits inside the union
    std::vector<std::vector<std::vector<int>>> src(n);
    for (int i = 0; i < n; ++i) {
        src[i].resize(u.sets[i].size());
        for (std::size_t pos = 0; pos < u.sets[i].size(); ++pos) {
            const Coord& c = coords[u.sets[i][pos] - 1];
            for (GeneratorId g : tables[i].slots[pos].gens) {
                auto it = std::lower_bound(c.gens.begin(), c.gens.end(), g);
                src[i][pos].push_back(static_cast<int>(it - c.gens.begin()));
            }
        }
    }

    std::vector<std::uint32_t> global_mask(u.m);  // per coordinate, per table occurrence below
    Complex sum{0.0, 0.0};
    const std::uint64_t total = std::uint64_t{1} << bits;
    std::vector<std::vector<std::uint32_t>> occ_mask(u.m);
    for (int j = 0; j < u.m; ++j) occ_mask[j].resize(coords[j].occ.size());

    for (std::uint64_t code = 0; code < total; ++code) {
        for (int j = 0; j < u.m; ++j) {
            const Coord& c = coords[j];
            const int g = static_cast<int>(c.gens.size());
            std::uint32_t acc = 0;
            for (std::size_t copy = 0; copy + 1 < c.occ.size(); ++copy) {
                std::uint32_t mask = static_cast<std::uint32_t>(
                    (code >> (c.bit_offset + copy * g)) & ((std::uint64_t{1} << g) - 1));
                occ_mask[j][copy] = mask;
                acc ^= mask;
            }
            occ_mask[j].back() = acc;  // last occurrence carries the product
        }
        Complex prod{1.0, 0.0};
        for (int i = 0; i < n && prod != Complex{0.0, 0.0}; ++i) {
            std::uint64_t idx = 0;
            std::size_t offset = 0;
            for (std::size_t pos = 0; pos < u.sets[i].size(); ++pos) {
                const Coord& c = coords[u.sets[i][pos] - 1];
                std::size_t which = 0;
                while (c.occ[which] != std::pair<int, int>{i, static_cast<int>(pos)}) ++which;
                std::uint32_t local = gather_bits(occ_mask[u.sets[i][pos] - 1][which],
                                                  src[i][pos]);
                idx += static_cast<std::uint64_t>(local) << offset;
                offset += tables[i].slots[pos].gens.size();
            }
            prod *= tables[i].values[idx];
        }
        sum += prod;
    }
    return sum / static_cast<double>(total);
}

KfoldResult phi_k_parseval(const std::vector<CoordVector>& xs, int k, Session& session,
                           const phi::PhiConfig& cfg) {
    if (k < 2) throw ConfigError("phi_k_parseval requires k >= 2");
    if (static_cast<int>(xs.size()) != k)
        throw ConfigError("phi_k_parseval: expected exactly k vectors");

    for (const auto& x : xs)
        for (const auto& [key, v] : x.entries()) session.tau0(key);

    std::vector<phi::PhiSeries> built;
    std::vector<WalshSeries> assembled;
    built.reserve(k);
    for (const auto& x : xs) {
        built.push_back(phi::build_phi_k(x, k, session, cfg));
        assembled.push_back(built.back().assembled());
    }

    Complex value{0.0, 0.0};
    for (const auto& [w, c] : assembled[0].sorted_terms()) {
        Complex prod = c;
        for (int i = 1; i < k && prod != Complex{0.0, 0.0}; ++i)
            prod *= assembled[i].coeff(w);
        value += prod;
    }

    double telescope = 1.0;
    for (const auto& b : built) telescope *= b.certificate.telescope_remainder;
    double prune = 0.0;
    for (int i = 0; i < k; ++i) {
        double cross = built[i].certificate.prune_remainder;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            cross *= assembled[j].l2_norm() + built[j].certificate.prune_remainder;
        }
        prune += cross;
    }
    return {value, telescope + prune};
}

PointSet three_halves_product(int k) {
    PointSet ps;
    ps.d = 3;
    ps.universe = {k * k, k * k, k * k};
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                ps.points.push_back({a * k + b, b * k + c, a * k + c});
    return ps;
}

namespace {

std::uint64_t binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::uint64_t v = 1;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

std::int64_t count_in(const PointSet& f, const std::vector<std::uint64_t>& masks) {
    std::int64_t c = 0;
    for (const auto& pt : f.points) {
        bool in = true;
        for (int i = 0; i < f.d && in; ++i) in = masks[i] >> pt[i] & 1;
        c += in;
    }
    return c;
}

}  // namespace

std::int64_t psi_gauge(const PointSet& f, int s, PsiMode mode, std::uint64_t work_cap) {
    if (f.d < 1) throw ConfigError("psi_gauge: empty point set shape");
    for (int u : f.universe) {
        if (u < s) throw ConfigError("psi_gauge: s exceeds an axis size");
        if (u > 63) throw WorkCap("psi_gauge: axis larger than 63 values");
    }

    if (mode == PsiMode::witness) {
        // greedy: the s most frequent values per axis give a lower bound
        std::vector<std::uint64_t> masks(f.d, 0);
        for (int i = 0; i < f.d; ++i) {
            std::vector<std::pair<std::int64_t, int>> freq;
            for (int v = 0; v < f.universe[i]; ++v) freq.emplace_back(0, v);
            for (const auto& pt : f.points) --freq[pt[i]].first;  // negated for sorting
            std::sort(freq.begin(), freq.end());
            for (int r = 0; r < s; ++r) masks[i] |= std::uint64_t{1} << freq[r].second;
        }
        return count_in(f, masks);
    }

    double work = static_cast<double>(f.points.size());
    for (int i = 0; i < f.d; ++i) work *= static_cast<double>(binomial(f.universe[i], s));
    if (work > static_cast<double>(work_cap)) throw WorkCap("psi_gauge: exhaustive search too large");

    // odometer over combinations per axis
    std::vector<std::vector<int>> choice(f.d, std::vector<int>(s));
    for (int i = 0; i < f.d; ++i) std::iota(choice[i].begin(), choice[i].end(), 0);
    auto advance = [&](int axis) -> bool {
        auto& c = choice[axis];
        int n = f.universe[axis];
        int i = s - 1;
        while (i >= 0 && c[i] == n - s + i) --i;
        if (i < 0) return false;
        ++c[i];
        for (int j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
        return true;
    };

    std::int64_t best = 0;
    std::vector<std::uint64_t> masks(f.d);
    for (;;) {
        for (int i = 0; i < f.d; ++i) {
            masks[i] = 0;
            for (int v : choice[i]) masks[i] |= std::uint64_t{1} << v;
        }
        best = std::max(best, count_in(f, masks));
        int axis = f.d - 1;
        while (axis >= 0 && !advance(axis)) {
            std::iota(choice[axis].begin(), choice[axis].end(), 0);
            --axis;
        }
        if (axis < 0) break;
    }
    return best;
}

KszResult ksz_demo(int n, int trials, int samples, std::uint64_t seed, bool all_ones) {
    if (n < 1 || n > 12) throw ConfigError("ksz_demo requires 1 <= N <= 12");
    if (trials < 1) trials = 1;

    const double cube = static_cast<double>(n) * n * n;
    KszResult best;
    best.l1_upper = cube;

    std::vector<int> eps(n * n * n, 1);
    std::vector<int> us(n * n), vs(n * n);

    auto sample_value = [&]() {
        // third factor maximized exactly: sum_{ik} |sum_j eps u v|
        std::int64_t total = 0;
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                std::int64_t m = 0;
                for (int j = 0; j < n; ++j)
                    m += eps[(i * n + j) * n + k] * us[i * n + j] * vs[j * n + k];
                total += std::llabs(m);
            }
        }
        return static_cast<double>(total);
    };

    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, static_cast<std::uint64_t>(t));
        if (!all_ones)
            for (auto& e : eps) e = rng.sign();
        std::fill(us.begin(), us.end(), 1);
        std::fill(vs.begin(), vs.end(), 1);
        double est = sample_value();  // deterministic all-ones baseline
        for (int smp = 0; smp < samples; ++smp) {
            for (auto& u : us) u = rng.sign();
            for (auto& v : vs) v = rng.sign();
            est = std::max(est, sample_value());
        }
        double vnorm = cube / est;
        if (vnorm > best.vnorm_lower) {
            best.vnorm_lower = vnorm;
            best.sup_estimate = est;
        }
    }
    return best;
}

}  // namespace dg::multilinear
