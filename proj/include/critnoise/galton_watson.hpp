#pragma once

// Height tails of Galton-Watson trees with Binomial(n, mu/n) offspring.

#include <cstdint>
#include <utility>

#include "critnoise/rng.hpp"

namespace critnoise {

// Scale a_k with 2/a_k >= P(height >= k) >= 1/a_k:
// a_k = 1 + (1 - mu/n)(1 - mu^(-k))/(mu - 1), continued as
// a_k = 1 + (1 - mu/n) k at mu = 1.
double gw_tail_scale(std::uint64_t n, double mu, std::uint32_t k);

// (1/a_k, 2/a_k).
std::pair<double, double> gw_height_bounds(std::uint64_t n, double mu,
                                           std::uint32_t k);

// Height of one tree, capped at k_cap: generation sizes evolve as
// Z_{j+1} ~ Binomial(Z_j * n, mu/n), and the height is the last generation
// with Z > 0.
std::uint32_t sample_gw_height(std::uint64_t n, double mu, std::uint32_t k_cap,
                               Rng& rng);

}  // namespace critnoise
