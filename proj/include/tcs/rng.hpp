#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tcs {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : label) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return derive_seed(parent, h);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace tcs
