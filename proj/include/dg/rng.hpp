#pragma once

#include <cstdint>

namespace dg {

/**
 * Counter-based random generator (splitmix64 core).
 *
 * A stream is fully determined by (seed, stream): drawing case i from
 * CounterRng(seed, i) gives the same numbers no matter how many other
 * cases ran before it, so seeded campaigns are order-independent and
 * safe to parallelize.
 */
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(bootstrap(seed, stream)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /** Uniform double in [0, 1). */
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /** Uniform integer in [0, n). n must be positive. */
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    /** Fair sign, -1 or +1. */
    int sign() { return (next_u64() & 1) ? 1 : -1; }

  private:
    static std::uint64_t bootstrap(std::uint64_t seed, std::uint64_t stream) {
        // one avalanche round so that (seed, stream) pairs decorrelate
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace dg
