#pragma once

#include <cstdint>
#include <random>

namespace arbor {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used to decorrelate per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for one trial: results do not depend on trial order.
inline Rng trial_stream(std::uint64_t seed, std::uint64_t trial) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL)));
}

}  // namespace arbor
