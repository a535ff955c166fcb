#pragma once

// Monte Carlo summaries of a subcritical core G(n, p0) with 1 - n p0 =
// theta, against the first-order predictions
//   E[sum |C_i|^r]  ~ theta^(3-2r) n          (r = 2, 3)
//   E[Z]            ~ (1-theta)/theta^2 n
//   median |C_1|    ~ (log xi - 5 log log xi)/(-theta - log(1-theta))
//   d_max           <  (log xi + 10)/(-log(1-theta))   w.h.p.
//   E[X_k] in [(1-theta)^k - 3k^2 (1-theta)^(k+1)/(theta n), (1-theta)^k]
// with xi = theta^3 n.

#include <cstdint>
#include <vector>

namespace critnoise {

struct SubcriticalOptions {
  bool moments = true;    // S2, S3
  bool z_stats = false;   // Z mean and variance (all-source BFS per trial)
  bool extremes = false;  // |C1| median, max diameter vs bound
};

struct SubcriticalSummary {
  std::uint64_t n = 0;
  double theta = 0.0;
  std::uint64_t trials = 0;

  double mean_s2 = 0.0, pred_s2 = 0.0;
  double mean_s3 = 0.0, pred_s3 = 0.0;

  double mean_z = 0.0, pred_z = 0.0;
  double var_z = 0.0, var_z_cap = 0.0;  // cap: 10 theta^(-7) n

  double median_c1 = 0.0, center_c1 = 0.0, c1_halfwidth = 0.0;
  double diam_bound = 0.0;
  double diam_within_frac = 0.0;  // share of trials with d_max < bound
};

SubcriticalSummary subcritical_stats(std::uint64_t n, double theta,
                                     double lambda, std::uint64_t trials,
                                     std::uint64_t master_seed,
                                     const SubcriticalOptions& opt = {});

struct LevelMean {
  std::uint32_t k = 0;
  double mean = 0.0;
  double std_err = 0.0;  // cluster-robust over graphs
  double lo = 0.0, hi = 0.0;
};

// Mean BFS level sizes over `graphs` independent cores with
// `roots_per_graph` uniform roots each, with the predicted sandwich.
std::vector<LevelMean> level_mean_profile(std::uint64_t n, double theta,
                                          double lambda, std::uint64_t graphs,
                                          std::uint64_t roots_per_graph,
                                          std::uint32_t k_max,
                                          std::uint64_t master_seed);

}  // namespace critnoise
