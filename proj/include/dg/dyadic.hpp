#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dg/errors.hpp"

namespace dg {

using GeneratorId = std::uint32_t;
using Complex = std::complex<double>;

/**
 * A Walsh character: a finite product of distinct Rademacher generators,
 * stored as a sorted id array with a cached hash. The empty set is the
 * identity character r0. Multiplication is symmetric difference of the
 * generator sets, which makes every character self-inverse.
 */
class Character {
  public:
    Character() { rehash(); }
    /** Takes a set of generator ids; duplicates are invalid. */
    explicit Character(std::vector<GeneratorId> gens);

    static Character identity() { return Character{}; }

    const std::vector<GeneratorId>& gens() const { return gens_; }
    std::size_t order() const { return gens_.size(); }
    bool is_identity() const { return gens_.empty(); }
    std::size_t hash() const { return hash_; }

    friend bool operator==(const Character& a, const Character& b) { return a.gens_ == b.gens_; }
    friend bool operator!=(const Character& a, const Character& b) { return !(a == b); }
    /** Lexicographic order on id arrays; used for deterministic iteration. */
    friend bool operator<(const Character& a, const Character& b) { return a.gens_ < b.gens_; }

  private:
    void rehash();

    std::vector<GeneratorId> gens_;
    std::size_t hash_ = 0;
};

/** Group law in the character group: symmetric difference of generator sets. */
Character char_mul(const Character& a, const Character& b);

struct CharacterHash {
    std::size_t operator()(const Character& c) const { return c.hash(); }
};

/**
 * A point of the dyadic group: a sign per generator, defaulting to +1
 * for every id that was never set. Evaluating a character multiplies
 * the signs of its generators.
 */
class SignVector {
  public:
    void set(GeneratorId g, int sign);
    int at(GeneratorId g) const { return neg_.count(g) ? -1 : 1; }
    int eval(const Character& w) const;

  private:
    std::unordered_set<GeneratorId> neg_;
};

/**
 * Sparse Walsh series: a finite complex coefficient map over characters,
 * together with a ledger of pruned mass. Stored coefficients are never
 * exactly zero. dropped_l2 / dropped_l1 are certified upper bounds for
 * the l2 / l1 mass of everything that was discarded along the way; they
 * only grow.
 */
class WalshSeries {
  public:
    using CoeffMap = std::unordered_map<Character, Complex, CharacterHash>;

    WalshSeries() = default;
    explicit WalshSeries(std::uint64_t session) : session_(session) {}

    static WalshSeries monomial(Character w, Complex c, std::uint64_t session = 0);

    /** Accumulates c onto the coefficient of w, erasing exact zeros. */
    void add_term(const Character& w, Complex c);
    Complex coeff(const Character& w) const;
    const CoeffMap& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t term_count() const { return coeffs_.size(); }

    double l1_norm() const;
    double l2_norm() const;

    double dropped_l1() const { return dropped_l1_; }
    double dropped_l2() const { return dropped_l2_; }
    /** Adds certified pruned mass to the ledgers (monotone). */
    void note_dropped(double l1, double l2);

    std::uint64_t session() const { return session_; }
    void set_session(std::uint64_t s) { session_ = s; }

    /** Drops coefficients below eps into the ledger. */
    void prune(double eps);

    /** Terms sorted by character; the deterministic view used for io. */
    std::vector<std::pair<Character, Complex>> sorted_terms() const;

  private:
    CoeffMap coeffs_;
    double dropped_l1_ = 0.0;
    double dropped_l2_ = 0.0;
    std::uint64_t session_ = 0;  // 0 = not bound to any session
};

/** Coefficientwise linear combination; ledgers combine by |scalar|-weighted sums. */
WalshSeries series_linear(const std::vector<std::pair<Complex, const WalshSeries*>>& ops);

/**
 * Pointwise product on the group: coefficient convolution over symmetric
 * differences. Coefficients below prune_eps are dropped into the ledgers.
 */
WalshSeries series_mul(const WalshSeries& f, const WalshSeries& g, double prune_eps = 0.0);

/** Pointwise evaluation at a sign vector. */
Complex evaluate(const WalshSeries& f, const SignVector& omega);

/**
 * Spectral pairing sum f^(w) g^(w) -- bilinear, no conjugation, because
 * characters are real-valued. Equals the Haar integral of fg when both
 * series are exact. Throws SessionMismatch for series bound to
 * different sessions.
 */
Complex parseval_pair(const WalshSeries& f, const WalshSeries& g);

/** Coefficientwise complex conjugation (characters are real). */
WalshSeries conj_series(const WalshSeries& f);

enum class SupMode { exact, sampled };

struct SupBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/**
 * Certified uniform-norm bounds.
 *
 * Exact mode enumerates sign assignments and returns lower == upper.
 * Generators are split into independent components (connected via shared
 * characters); each component is enumerated separately and the value sets
 * are combined through Minkowski sums of their convex hulls, which is
 * exact for the maximum modulus. The bit cap applies per component.
 *
 * Sampled mode evaluates `budget` seeded random sign vectors for the lower
 * bound and returns l1_norm + dropped_l1 as the upper bound.
 */
SupBounds sup_norm(const WalshSeries& f, SupMode mode = SupMode::exact,
                   std::uint64_t budget = 1 << 16, int bit_cap = 20, std::uint64_t seed = 1);

/**
 * A session owns the generator universe: the partition of fresh ids into
 * per-level blocks and the memoized bijections tau. tau0 maps original
 * coordinates into block 1; tau(level, w) maps an odd character of order
 * >= 3 over block `level` to a fresh generator in block level+1. Two
 * calls with the same arguments always return the same id, and ids are
 * never reused, so every series built inside one session can be paired
 * against any other.
 *
 * Sessions are single-writer: run all builds that must share maps
 * sequentially; concurrent read-only use afterwards is fine, and
 * independent sessions parallelize freely.
 */
class Session {
  public:
    Session();

    std::uint64_t id() const { return id_; }

    GeneratorId tau0(std::uint64_t coord);
    GeneratorId tau(int level, const Character& w);

    /** Block a generator lives in (1-based level), 0 if unknown. */
    int block_of(GeneratorId g) const;
    std::size_t generator_count() const { return next_; }

  private:
    GeneratorId fresh(int block);

    std::uint64_t id_;
    GeneratorId next_ = 0;
    std::map<std::uint64_t, GeneratorId> tau0_;
    std::vector<std::map<Character, GeneratorId>> tau_;  // index = level
    std::vector<int> block_of_;                          // index = generator id
};

}  // namespace dg
