#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace qam {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent stream seed for run `index` of an experiment seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng& rng) noexcept;

/// Uniform integer in [0, n). Rejection sampling, so the result does not
/// depend on the standard library's distribution implementation.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

}  // namespace qam
