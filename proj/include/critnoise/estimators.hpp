#pragma once

// Monte Carlo estimators for cov(f(G), f(G_eps)) and its conditional
// variance form Var(P(f = 1 | core)), plus the stability diagnostics that
// compare component structure before and after sprinkling.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "critnoise/observables.hpp"
#include "critnoise/sampling.hpp"

namespace critnoise {

struct PairCounts {
  std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

  void add(bool x, bool y) {
    std::uint64_t& c = x ? (y ? n11 : n10) : (y ? n01 : n00);
    ++c;
  }
  std::uint64_t total() const { return n00 + n01 + n10 + n11; }
};

struct CovarianceEstimate {
  double cov = 0.0;
  double cov_std_err = 0.0;
  double corr = 0.0;       // cov / (p(1-p)), pooled p
  double corr_std_err = 0.0;
  bool corr_defined = false;
  double p_pooled = 0.0;
  double mean_f = 0.0;
  double mean_feps = 0.0;
  std::uint64_t trials = 0;
};

// Plug-in covariance and correlation with leave-one-out (jackknife)
// standard errors, grouped by the four (f, f_eps) outcomes.
CovarianceEstimate covariance_from_counts(const PairCounts& counts);

// Per trial: G from the core stream, G_eps = noise applied to G from the
// noise stream, observable on both.
CovarianceEstimate estimate_covariance(const NoiseParams& params,
                                       const Observable& f,
                                       std::uint64_t trials,
                                       std::uint64_t master_seed);

struct ConditionalVarianceEstimate {
  double var_hat = 0.0;
  double std_err = 0.0;
  double grand_mean = 0.0;  // mean of the inner means
  std::uint64_t outer = 0;
  std::uint64_t inner = 0;
};

// Sample variance of the inner means minus the mean of pbar(1-pbar)/(m-1),
// which cancels the inner binomial noise exactly in expectation.
ConditionalVarianceEstimate conditional_variance_from_means(
    const std::vector<double>& inner_means, std::uint64_t inner);

// Outer loop: core ~ G(n, p0); inner loop: core + fresh p1-sprinkle,
// observable evaluated per sprinkle.
ConditionalVarianceEstimate estimate_conditional_variance(
    const NoiseParams& params, const Observable& f, std::uint64_t outer,
    std::uint64_t inner, std::uint64_t master_seed);

struct SensitivityTrial {
  bool f_g = false;
  bool f_geps = false;
  double x_l2_delta = 0.0;
  std::vector<std::uint32_t> sizes_g;
  std::vector<std::uint32_t> sizes_geps;
  std::optional<std::pair<Graph, Graph>> graphs;  // filled on request
};

SensitivityTrial run_sensitivity_trial(const NoiseParams& params,
                                       const Observable& f,
                                       std::uint64_t master_seed,
                                       std::uint64_t trial_id,
                                       bool keep_graphs = false);

struct StabilityTrialResult {
  bool a_holds = false;  // component of G1 containing C_j(G0) is C_j(G1)
  bool b_holds = false;  // new vertices of C_j(G1) within delta n^(1/3) of C_j(G0)
  bool c_holds = false;  // all C_j(G0) pairwise distances preserved in G1
  std::uint32_t b_sup = 0;  // the sup in B; UINT32_MAX when unreachable
  double x_l2_delta = 0.0;
  double ghp_bound = 0.0;  // embedded upper bound; NaN unless a && c
  std::uint32_t cj_g0 = 0;
  std::uint32_t cj_g1 = 0;
  std::optional<std::pair<Graph, Graph>> graphs;  // (core, g1) on request
};

struct StabilityReport {
  double freq_a = 0.0;
  double freq_b = 0.0;
  double freq_c = 0.0;
  double median_dx = 0.0;
  double median_ghp = 0.0;  // over trials where defined; NaN if none
  double delta = 0.0;
  std::uint32_t j = 1;
  std::vector<StabilityTrialResult> trials;
};

StabilityTrialResult run_stability_trial(const NoiseParams& params,
                                         double delta, std::uint32_t j,
                                         std::uint64_t master_seed,
                                         std::uint64_t trial_id,
                                         bool keep_graphs = false);

StabilityReport summarize_stability(std::vector<StabilityTrialResult> trials,
                                    double delta, std::uint32_t j);

StabilityReport stability_diagnostics(const NoiseParams& params,
                                      std::uint64_t trials, double delta,
                                      std::uint32_t j,
                                      std::uint64_t master_seed);

}  // namespace critnoise
