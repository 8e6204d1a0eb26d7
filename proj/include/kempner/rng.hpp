#pragma once

#include <cstdint>

namespace kempner {

// splitmix64: tiny deterministic generator with a portable, fully specified
// output sequence. Used for Monte-Carlo sampling so runs are reproducible
// bit-for-bit on every platform for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, n) by rejection; unbiased for any n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t state_;
};

// Seed for sample chunk `chunk` of a run seeded with `seed`. Sampling is
// split into fixed-size chunks so a partitioned (multi-worker) run that
// assigns whole chunks to workers reproduces the sequential result exactly.
inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    SplitMix64 mix(seed ^ (0xa0761d6478bd642fULL * (chunk + 1)));
    return mix.next();
}

inline constexpr std::uint64_t kMcChunkSize = 65536;

} // namespace kempner
