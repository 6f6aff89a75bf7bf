#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fdastap::rng {

// One master seed fans out to independent module streams keyed by a fixed
// label, so adding a consumer never perturbs the draws of another.
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (char c : label) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
    }
    // splitmix finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

inline std::mt19937_64 stream(std::uint64_t seed, std::string_view label) {
    return std::mt19937_64(stream_seed(seed, label));
}

} // namespace fdastap::rng
