#pragma once

#include <cstdint>

namespace qcert {

/// Counter-based 64-bit generator, pinned as "splitmix64-v1". Streams are
/// derived from (seed, stream index) so independent shots replay identically
/// regardless of evaluation order.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static std::uint64_t hash(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Stream for a given shot or substream index.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(hash(seed) ^ hash(index * 0x9E3779B97F4A7C15ULL + 1));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static const char* name() { return "splitmix64-v1"; }

  private:
    std::uint64_t state_;
};

}  // namespace qcert
