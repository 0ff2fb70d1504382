#pragma once

#include "fractal_tube/geometry.hpp"

#include <cstdint>
#include <random>

namespace fractal_tube::detail {

/// Independent generator for chunk `chunk` of a run seeded with `seed`.
inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                      0x5eedu};
    return std::mt19937_64(seq);
}

/// Uniform double in [0,1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Vec2 uniform_point(std::mt19937_64& rng, const Box2& box)
{
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    return {box.lo.x + u * box.width(), box.lo.y + v * box.height()};
}

}  // namespace fractal_tube::detail
