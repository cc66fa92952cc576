#pragma once

#include <cstdint>

namespace rendezline {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class Stream : std::uint64_t { Flips = 1, Delay = 2, Epsilon = 3, Noise = 4 };

/// Seed of one robot's sub-stream. The robot id and stream tag are folded
/// into the trial seed, so adding robots leaves existing streams unchanged.
constexpr std::uint64_t stream_seed(std::uint64_t trial_seed, int robot, Stream stream) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(robot) << 8) | static_cast<std::uint64_t>(stream);
    return splitmix64(trial_seed ^ splitmix64(key));
}

}  // namespace rendezline
