#pragma once

// Critical-window G(n,p) sampling, the per-edge noise operator, and the
// equivalent two-round sprinkling construction.
//
// With p = (1 + lambda * n^(-1/3)) / n and noise level eps, the sprinkling
// parameters are
//   p0 = p (1 - eps) / (1 - eps p),   p1 = eps p,
// which satisfy p0 + (1 - p0) p1 = p: adding an independent p1-sprinkle to
// G(n,p0) reproduces G(n,p), and two sprinkles over a shared core have the
// same joint law as (G, noisy G).

#include <cstdint>

#include "critnoise/graph.hpp"
#include "critnoise/rng.hpp"

namespace critnoise {

struct NoiseParams {
  std::uint64_t n = 0;
  double lambda = 0.0;
  double eps = 0.0;
  double p = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double theta = 0.0;  // 1 - n * p0

  double xi() const { return theta * theta * theta * static_cast<double>(n); }
};

// From the window parametrization p = (1 + lambda n^(-1/3)) / n.
NoiseParams derive_noise_params(std::uint64_t n, double lambda, double eps);

// From an explicit edge probability.
NoiseParams noise_params_from_p(std::uint64_t n, double p, double eps);

// Choose eps so that the core density satisfies 1 - n p0 = theta exactly.
NoiseParams noise_params_from_theta(std::uint64_t n, double lambda,
                                    double theta);

// G(n, p) by geometric skips over the row-major pair order; output canonical.
Graph sample_gnp(Vertex n, double p, Rng& rng);

// Resample every vertex pair independently with probability eps: present
// edges survive with probability 1 - eps (1 - p), absent pairs appear with
// probability eps p.
Graph apply_noise(const Graph& g, const NoiseParams& params, Rng& rng);

struct SprinklingTriple {
  Graph core;    // G(n, p0)
  Graph g1;      // core + first sprinkle,  law G(n, p)
  Graph g1_eps;  // core + second sprinkle, law G(n, p)
};

// The three streams must be independent; derive them from one master seed
// with purposes core / sprinkle1 / sprinkle2.
SprinklingTriple sample_sprinkling_triple(const NoiseParams& params,
                                          Rng& core_rng, Rng& s1_rng,
                                          Rng& s2_rng);

SprinklingTriple sample_sprinkling_triple(const NoiseParams& params,
                                          std::uint64_t master_seed,
                                          std::uint64_t trial_id);

// Core plus one fresh p1-sprinkle (the conditional law of G given the core).
Graph sprinkle_onto(const Graph& core, double p1, Rng& rng);

}  // namespace critnoise
