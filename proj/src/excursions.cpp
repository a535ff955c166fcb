#include "critnoise/excursions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace critnoise {

namespace {

void check_grid(double T, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(T >= dt)) throw std::invalid_argument("horizon shorter than one step");
}

std::size_t step_count(double T, double dt) {
  return static_cast<std::size_t>(std::floor(T / dt + 1e-9));
}

}  // namespace

std::vector<double> sample_reflected_path(double lambda, double T, double dt,
                                          Rng& rng) {
  check_grid(T, dt);
  const std::size_t n = step_count(T, dt);
  const double sdt = std::sqrt(dt);
  std::vector<double> path(n + 1);
  double w = 0.0, low = 0.0;
  path[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i * dt;
    w += (lambda - t) * dt + sdt * rng.normal();
    low = std::min(low, w);
    path[i + 1] = w - low;
  }
  return path;
}

ExcursionSequence excursions_from_path(const std::vector<double>& path,
                                       double T, double dt) {
  check_grid(T, dt);
  ExcursionSequence out;
  out.horizon = T;
  out.dt = dt;
  std::size_t run = 0;
  for (const double v : path) {
    if (v > 0.0) {
      ++run;
    } else {
      if (run >= 2) out.lengths.push_back((run - 1) * dt);
      run = 0;
    }
  }
  if (run >= 2) out.lengths.push_back((run - 1) * dt);
  std::sort(out.lengths.begin(), out.lengths.end(), std::greater<>());
  return out;
}

ExcursionSequence sample_excursions(double lambda, double T, double dt,
                                    Rng& rng) {
  check_grid(T, dt);
  const std::size_t n = step_count(T, dt);
  const double sdt = std::sqrt(dt);
  ExcursionSequence out;
  out.horizon = T;
  out.dt = dt;
  double w = 0.0, low = 0.0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i * dt;
    w += (lambda - t) * dt + sdt * rng.normal();
    low = std::min(low, w);
    if (w - low > 0.0) {
      ++run;
    } else {
      if (run >= 2) out.lengths.push_back((run - 1) * dt);
      run = 0;
    }
  }
  if (run >= 2) out.lengths.push_back((run - 1) * dt);
  std::sort(out.lengths.begin(), out.lengths.end(), std::greater<>());
  return out;
}

}  // namespace critnoise
