#pragma once

#include <cstdint>

namespace mfg {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based stream: the draw for (seed, step, player) does not depend
/// on evaluation order, so simulations are reproducible under any schedule.
inline std::uint64_t stream_bits(std::uint64_t seed, std::uint64_t step,
                                 std::uint64_t player) {
    return splitmix64(splitmix64(splitmix64(seed) ^ step) ^ player);
}

/// Uniform double in [0, 1) from 53 high bits.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double stream_uniform(std::uint64_t seed, std::uint64_t step,
                             std::uint64_t player) {
    return to_unit(stream_bits(seed, step, player));
}

} // namespace mfg
