#pragma once

// Excursion lengths of reflected Brownian motion with parabolic drift,
// W_t = B_t + lambda*t - t^2/2 reflected at its running minimum.

#include <vector>

#include "critnoise/rng.hpp"

namespace critnoise {

struct ExcursionSequence {
  std::vector<double> lengths;  // decreasing
  double horizon = 0.0;
  double dt = 0.0;
};

// Reflected path on the grid 0, dt, ..., N*dt with N = floor(T/dt):
// Euler increments (lambda - t)dt + sqrt(dt)*Z, then subtract the running
// minimum.  Entry i is the reflected value at t = i*dt.
std::vector<double> sample_reflected_path(double lambda, double T, double dt,
                                          Rng& rng);

// Maximal runs of strictly positive entries; a run spanning grid indices
// a..b contributes length (b-a)*dt, so single-point blips are dropped.
ExcursionSequence excursions_from_path(const std::vector<double>& path,
                                       double T, double dt);

// Single pass without materializing the path; agrees exactly with
// excursions_from_path(sample_reflected_path(...)).
ExcursionSequence sample_excursions(double lambda, double T, double dt,
                                    Rng& rng);

}  // namespace critnoise
