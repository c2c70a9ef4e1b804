#pragma once

#include <cstdint>
#include <random>

namespace dsnsim {

/// Purposes a drop draws randomness for. Each gets an independent substream.
enum class StreamTag : std::uint32_t {
    Picos = 1,
    Ues = 2,
    Shadowing = 3,
    FAloha = 4,
};

/// Identifies one Monte-Carlo drop of one run. Substreams derived from it are
/// a pure function of (seed, drop, tag, id), never of thread scheduling.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint32_t drop = 0;

    std::mt19937_64 substream(StreamTag tag, std::uint64_t id = 0) const {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), drop,
                          static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(id),
                          static_cast<std::uint32_t>(id >> 32)};
        return std::mt19937_64(seq);
    }
};

}  // namespace dsnsim
