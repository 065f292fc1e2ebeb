#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dgi {

// FNV-1a, 64-bit. Used for prompt hashes and seeding per-item RNG streams.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

// splitmix64. Self-contained so seeded picks are identical across platforms
// and standard-library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform-enough index in [0, n); n must be > 0.
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t state_;
};

// Per-item RNG stream derived from (seed, key). Concurrent batch workers each
// derive their own stream, so scheduling never perturbs seeded choices.
inline SplitMix64 item_rng(std::uint64_t seed, std::string_view key) {
    return SplitMix64(fnv1a64(key) + 0x9e3779b97f4a7c15ULL * seed);
}

}  // namespace dgi
