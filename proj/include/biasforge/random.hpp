#pragma once

#include <cstdint>
#include <random>

namespace biasforge {

/// Seeded 64-bit stream. Equal seeds give bit-identical streams within a build.
/// A source is single-owner; concurrent work needs one source per task, obtained
/// through derive().
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t position() const noexcept { return position_; }

    std::uint64_t next() {
        ++position_;
        return engine_();
    }

    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform() {
        for (;;) {
            double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    /// Independent stream for a fixed offset (splitmix64 of seed and offset).
    RandomSource derive(std::uint64_t offset) const { return RandomSource(mix(seed_, offset)); }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t offset) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (offset + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace biasforge
