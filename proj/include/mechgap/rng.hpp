#pragma once

#include <cstdint>

namespace mechgap {

// Counter-based uniform stream built on the splitmix64 finalizer. Each
// (seed, stream, index) triple maps to one double in [0, 1), so draws are
// independent of evaluation order and of how samples are split over threads.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index) {
    std::uint64_t h = splitmix64(seed ^ 0x632be59bd9b4e019ULL);
    h = splitmix64(h ^ stream);
    return splitmix64(h ^ index);
}

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t index) {
    return static_cast<double>(mix(seed, stream, index) >> 11) * 0x1.0p-53;
}

}  // namespace rng
}  // namespace mechgap
