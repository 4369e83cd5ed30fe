#pragma once

#include <cstdint>
#include <random>

namespace topodyn {

/// splitmix64 finalizer; used to derive independent sub-seeds from (seed, task).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t task) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (task + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits. Unlike
/// std::uniform_real_distribution the result is identical on every standard library.
inline double unit_double(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace topodyn
