#ifndef NSMS_PRNG_HPP
#define NSMS_PRNG_HPP

#include <cstdint>

namespace nsms {

// SplitMix64. Small, fast, and fully reproducible across platforms; used for
// every stochastic choice in the project so runs are bit-identical per seed.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., bound-1}; bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  private:
    std::uint64_t state_;
};

}  // namespace nsms

#endif
