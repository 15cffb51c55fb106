#pragma once

#include <cstdint>

namespace csaug {

// Counter-based generator: draw n is the splitmix64 finalizer applied to
// seed + (n+1) * golden gamma. Stateless apart from the counter, so streams
// are reproducible across platforms and safe to split by counter ranges.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next() {
        ++counter_;
        return mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in [0, bound) by rejection, so there is no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t rem = (UINT64_MAX % bound + 1) % bound;
        const std::uint64_t limit = UINT64_MAX - rem;
        std::uint64_t raw = next();
        while (rem != 0 && raw > limit) {
            raw = next();
        }
        return raw % bound;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace csaug
