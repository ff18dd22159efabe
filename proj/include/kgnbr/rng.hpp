#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace kgnbr {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Per-item seed derived from a run seed and a stable item key.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
    return splitmix64(seed ^ fnv1a(key));
}

// Fisher-Yates driven directly by mt19937_64 output, so the permutation is identical across
// standard library implementations (std::shuffle and distributions are not).
template <typename T>
void stable_shuffle(std::span<T> items, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen() % i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace kgnbr
