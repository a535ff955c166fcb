#include "critnoise/galton_watson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace critnoise {

double gw_tail_scale(std::uint64_t n, double mu, std::uint32_t k) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (n == 0 || k == 0) throw std::invalid_argument("n and k must be positive");
  const double front = 1.0 - mu / static_cast<double>(n);
  if (mu == 1.0) return 1.0 + front * k;
  // (1 - mu^(-k))/(mu - 1), stable near mu = 1.
  const double ratio =
      -std::expm1(-static_cast<double>(k) * std::log(mu)) / (mu - 1.0);
  return 1.0 + front * ratio;
}

std::pair<double, double> gw_height_bounds(std::uint64_t n, double mu,
                                           std::uint32_t k) {
  const double ak = gw_tail_scale(n, mu, k);
  return {1.0 / ak, 2.0 / ak};
}

std::uint32_t sample_gw_height(std::uint64_t n, double mu, std::uint32_t k_cap,
                               Rng& rng) {
  if (!(mu >= 0.0) || mu > static_cast<double>(n))
    throw std::invalid_argument("offspring mean out of range");
  const double p = mu / static_cast<double>(n);
  std::uint64_t z = 1;
  for (std::uint32_t k = 0; k < k_cap; ++k) {
    if (z > std::numeric_limits<std::uint64_t>::max() / n)
      throw std::overflow_error("generation size overflow");
    z = rng.binomial_exact(z * n, p);
    if (z == 0) return k;
  }
  return k_cap;
}

}  // namespace critnoise
