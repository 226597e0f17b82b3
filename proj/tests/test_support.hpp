#pragma once

#include <cmath>
#include <vector>

#include "dg/dyadic.hpp"
#include "dg/riesz.hpp"
#include "dg/rng.hpp"

namespace dgtest {

inline dg::Character chr(std::initializer_list<dg::GeneratorId> ids) {
    return dg::Character(std::vector<dg::GeneratorId>(ids));
}

inline dg::CoordVector vec(std::initializer_list<double> entries) {
    dg::CoordVector x;
    dg::CoordKey k = 0;
    for (double v : entries) x.set(k++, dg::Complex{v, 0.0});
    return x;
}

inline dg::CoordVector cvec(std::initializer_list<dg::Complex> entries) {
    dg::CoordVector x;
    dg::CoordKey k = 0;
    for (dg::Complex v : entries) x.set(k++, v);
    return x;
}

/** Identity generator map over the support: coordinate k -> generator k. */
inline dg::riesz::GenMap identity_gens(const dg::CoordVector& x) {
    dg::riesz::GenMap gm;
    for (const auto& [k, v] : x.entries()) gm.emplace(k, static_cast<dg::GeneratorId>(k));
    return gm;
}

/** Random real vector: `support` coordinates drawn from [0, dim), entries away from zero. */
inline dg::CoordVector random_real_vector(dg::CounterRng& rng, int dim, int support,
                                          double lo = 0.1, double hi = 1.0) {
    dg::CoordVector x;
    std::vector<int> coords(dim);
    for (int i = 0; i < dim; ++i) coords[i] = i;
    for (int i = 0; i < support; ++i) {
        std::uint64_t j = i + rng.uniform_int(dim - i);
        std::swap(coords[i], coords[j]);
    }
    for (int i = 0; i < support; ++i) {
        double mag = rng.uniform(lo, hi);
        x.set(coords[i], dg::Complex{rng.sign() * mag, 0.0});
    }
    return x;
}

inline dg::CoordVector normalized(const dg::CoordVector& x, double p = 2.0) {
    double n = x.norm_p(p);
    return n == 0.0 ? x : x.scaled(dg::Complex{1.0 / n, 0.0});
}

inline dg::CoordVector random_unit_vector(dg::CounterRng& rng, int dim, int support) {
    return normalized(random_real_vector(rng, dim, support));
}

inline dg::CoordVector random_complex_unit_vector(dg::CounterRng& rng, int dim, int support) {
    dg::CoordVector re = random_real_vector(rng, dim, support);
    dg::CoordVector im = random_real_vector(rng, dim, support);
    dg::CoordVector x;
    for (int k = 0; k < dim; ++k) {
        dg::Complex v{re.at(k).real(), im.at(k).real()};
        if (v != dg::Complex{0.0, 0.0}) x.set(k, v);
    }
    return normalized(x);
}

/** Discrete Haar integral of f * g over the active generators of both. */
inline dg::Complex haar_pair(const dg::WalshSeries& f, const dg::WalshSeries& g) {
    std::vector<dg::GeneratorId> gens;
    for (const dg::WalshSeries* s : {&f, &g})
        for (const auto& [w, c] : s->coeffs())
            gens.insert(gens.end(), w.gens().begin(), w.gens().end());
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    const std::size_t m = gens.size();
    dg::Complex sum{0.0, 0.0};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        dg::SignVector omega;
        for (std::size_t b = 0; b < m; ++b)
            if (mask & (std::uint64_t{1} << b)) omega.set(gens[b], -1);
        sum += dg::evaluate(f, omega) * dg::evaluate(g, omega);
    }
    return sum / static_cast<double>(std::uint64_t{1} << m);
}

}  // namespace dgtest
