#include "critnoise/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "critnoise/distances.hpp"
#include "critnoise/metric_space.hpp"
#include "critnoise/stats.hpp"

namespace critnoise {

namespace {

struct CountStats {
  double cov;
  double corr;
  bool corr_ok;
};

CountStats stats_from(double n00, double n01, double n10, double n11) {
  const double t = n00 + n01 + n10 + n11;
  const double mx = (n10 + n11) / t;
  const double my = (n01 + n11) / t;
  const double cov = n11 / t - mx * my;
  const double p = (mx + my) / 2.0;
  CountStats s{cov, 0.0, p > 0.0 && p < 1.0};
  if (s.corr_ok) s.corr = cov / (p * (1.0 - p));
  return s;
}

}  // namespace

CovarianceEstimate covariance_from_counts(const PairCounts& c) {
  const std::uint64_t t = c.total();
  if (t < 2) throw std::invalid_argument("need at least two trials");
  CovarianceEstimate out;
  out.trials = t;
  const double n00 = c.n00, n01 = c.n01, n10 = c.n10, n11 = c.n11;
  const CountStats full = stats_from(n00, n01, n10, n11);
  out.cov = full.cov;
  out.mean_f = (n10 + n11) / static_cast<double>(t);
  out.mean_feps = (n01 + n11) / static_cast<double>(t);
  out.p_pooled = (out.mean_f + out.mean_feps) / 2.0;
  out.corr_defined = full.corr_ok;
  out.corr = full.corr;

  // Jackknife grouped by outcome cell: removing any trial from the same
  // cell gives the same leave-one-out estimate.
  const double counts[4] = {n00, n01, n10, n11};
  double loo_cov[4], loo_corr[4];
  bool corr_jack_ok = out.corr_defined;
  for (int k = 0; k < 4; ++k) {
    if (counts[k] == 0) continue;
    const CountStats s =
        stats_from(n00 - (k == 0), n01 - (k == 1), n10 - (k == 2),
                   n11 - (k == 3));
    loo_cov[k] = s.cov;
    loo_corr[k] = s.corr;
    if (!s.corr_ok) corr_jack_ok = false;
  }
  double mean_cov = 0.0, mean_corr = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (counts[k] == 0) continue;
    mean_cov += counts[k] * loo_cov[k];
    if (corr_jack_ok) mean_corr += counts[k] * loo_corr[k];
  }
  mean_cov /= static_cast<double>(t);
  mean_corr /= static_cast<double>(t);
  double ss_cov = 0.0, ss_corr = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (counts[k] == 0) continue;
    ss_cov += counts[k] * (loo_cov[k] - mean_cov) * (loo_cov[k] - mean_cov);
    if (corr_jack_ok)
      ss_corr +=
          counts[k] * (loo_corr[k] - mean_corr) * (loo_corr[k] - mean_corr);
  }
  const double scale = static_cast<double>(t - 1) / static_cast<double>(t);
  out.cov_std_err = std::sqrt(scale * ss_cov);
  out.corr_std_err = corr_jack_ok ? std::sqrt(scale * ss_corr)
                                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

SensitivityTrial run_sensitivity_trial(const NoiseParams& params,
                                       const Observable& f,
                                       std::uint64_t master_seed,
                                       std::uint64_t trial_id,
                                       bool keep_graphs) {
  Rng core = derive_stream(master_seed, trial_id, StreamPurpose::core);
  Rng noise = derive_stream(master_seed, trial_id, StreamPurpose::noise);
  Graph g = sample_gnp(static_cast<Vertex>(params.n), params.p, core);
  Graph geps = apply_noise(g, params, noise);
  SensitivityTrial out;
  out.sizes_g = component_sizes(g);
  out.sizes_geps = component_sizes(geps);
  const Vertex n = static_cast<Vertex>(params.n);
  if (f.kind == ObservableKind::size_threshold ||
      f.kind == ObservableKind::l2_ball) {
    out.f_g = evaluate_from_sizes(f, out.sizes_g, n);
    out.f_geps = evaluate_from_sizes(f, out.sizes_geps, n);
  } else {
    out.f_g = evaluate(f, g);
    out.f_geps = evaluate(f, geps);
  }
  out.x_l2_delta =
      l2_distance(size_vector(out.sizes_g, n), size_vector(out.sizes_geps, n));
  if (keep_graphs) out.graphs.emplace(std::move(g), std::move(geps));
  return out;
}

CovarianceEstimate estimate_covariance(const NoiseParams& params,
                                       const Observable& f,
                                       std::uint64_t trials,
                                       std::uint64_t master_seed) {
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  PairCounts counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const SensitivityTrial r = run_sensitivity_trial(params, f, master_seed, t);
    counts.add(r.f_g, r.f_geps);
  }
  return covariance_from_counts(counts);
}

ConditionalVarianceEstimate conditional_variance_from_means(
    const std::vector<double>& inner_means, std::uint64_t inner) {
  const std::size_t t = inner_means.size();
  if (t < 2) throw std::invalid_argument("need at least two outer trials");
  if (inner < 2) throw std::invalid_argument("need at least two inner trials");
  const double m = static_cast<double>(inner);
  ConditionalVarianceEstimate out;
  out.outer = t;
  out.inner = inner;

  double s1 = 0.0, s2 = 0.0, csum = 0.0;
  std::vector<double> corr(t);
  for (std::size_t i = 0; i < t; ++i) {
    const double p = inner_means[i];
    s1 += p;
    s2 += p * p;
    corr[i] = p * (1.0 - p) / (m - 1.0);
    csum += corr[i];
  }
  const double td = static_cast<double>(t);
  out.grand_mean = s1 / td;
  const double var_p = (s2 - s1 * s1 / td) / (td - 1.0);
  out.var_hat = var_p - csum / td;

  // Leave-one-out over outer trials.
  double mean_loo = 0.0;
  std::vector<double> loo(t);
  for (std::size_t i = 0; i < t; ++i) {
    const double p = inner_means[i];
    const double r1 = s1 - p, r2 = s2 - p * p, rc = csum - corr[i];
    const double v = (r2 - r1 * r1 / (td - 1.0)) / (td - 2.0);
    loo[i] = v - rc / (td - 1.0);
    mean_loo += loo[i];
  }
  mean_loo /= td;
  double ss = 0.0;
  for (const double v : loo) ss += (v - mean_loo) * (v - mean_loo);
  out.std_err = std::sqrt((td - 1.0) / td * ss);
  return out;
}

ConditionalVarianceEstimate estimate_conditional_variance(
    const NoiseParams& params, const Observable& f, std::uint64_t outer,
    std::uint64_t inner, std::uint64_t master_seed) {
  if (outer < 3) throw std::invalid_argument("need at least three outer trials");
  if (inner < 2) throw std::invalid_argument("need at least two inner trials");
  std::vector<double> means;
  means.reserve(outer);
  const Vertex n = static_cast<Vertex>(params.n);
  for (std::uint64_t t = 0; t < outer; ++t) {
    Rng core_rng = derive_stream(master_seed, t, StreamPurpose::core);
    const Graph core = sample_gnp(n, params.p0, core_rng);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < inner; ++s) {
      Rng rng = derive_stream(master_seed, t, StreamPurpose::sprinkle1, s);
      const Graph g = sprinkle_onto(core, params.p1, rng);
      if (f.kind == ObservableKind::size_threshold ||
          f.kind == ObservableKind::l2_ball) {
        hits += evaluate_from_sizes(f, component_sizes(g), n);
      } else {
        hits += evaluate(f, g);
      }
    }
    means.push_back(static_cast<double>(hits) / static_cast<double>(inner));
  }
  return conditional_variance_from_means(means, inner);
}

StabilityTrialResult run_stability_trial(const NoiseParams& params,
                                         double delta, std::uint32_t j,
                                         std::uint64_t master_seed,
                                         std::uint64_t trial_id,
                                         bool keep_graphs) {
  if (j == 0) throw std::invalid_argument("component rank is 1-based");
  SprinklingTriple triple =
      sample_sprinkling_triple(params, master_seed, trial_id);
  const Graph& g0 = triple.core;
  const Graph& g1 = triple.g1;
  const ComponentDecomposition d0 = components(g0);
  const ComponentDecomposition d1 = components(g1);
  StabilityTrialResult out;
  out.x_l2_delta = l2_distance(size_vector(d0), size_vector(d1));
  out.ghp_bound = std::numeric_limits<double>::quiet_NaN();
  if (j > d0.count() || j > d1.count())
    throw std::invalid_argument("component rank exceeds component count");
  const std::size_t j0 = j - 1;
  const auto mem0 = d0.members_of(j0);
  out.cj_g0 = d0.sizes[j0];
  out.cj_g1 = d1.sizes[j0];

  // A: the G1 component containing C_j(G0) is the j-th largest of G1.
  const std::uint32_t host = d1.label[mem0.front()];
  out.a_holds = host == j0;

  const Adjacency adj1(g1);

  // B: every vertex of C_j(G1) outside C_j(G0) lies within delta n^(1/3)
  // of C_j(G0) in G1.
  const auto mem1 = d1.members_of(j0);
  std::vector<Vertex> probe;
  std::set_difference(mem1.begin(), mem1.end(), mem0.begin(), mem0.end(),
                      std::back_inserter(probe));
  if (probe.empty()) {
    out.b_sup = 0;
  } else {
    out.b_sup = sup_distance_to_set(adj1, mem0, probe);
  }
  const double b_cap = delta * std::cbrt(static_cast<double>(params.n));
  out.b_holds = out.b_sup != ~0u && static_cast<double>(out.b_sup) <= b_cap;

  // C: no pair inside C_j(G0) gets strictly closer in G1.
  const Adjacency adj0(g0);
  out.c_holds = distances_preserved(adj0, adj1, mem0);

  if (out.a_holds && out.c_holds) {
    const double len = 1.0 / std::cbrt(static_cast<double>(params.n));
    const double mass = len * len;
    const MeasuredMetricSpace sub = extract_space(g0, d0, j0, len, mass);
    const MeasuredMetricSpace super = extract_space(g1, d1, j0, len, mass);
    std::vector<std::size_t> embedding(mem0.size());
    for (std::size_t i = 0; i < mem0.size(); ++i) {
      const auto it = std::lower_bound(mem1.begin(), mem1.end(), mem0[i]);
      embedding[i] = static_cast<std::size_t>(it - mem1.begin());
    }
    out.ghp_bound = ghp_upper_embedded(sub, super, embedding);
  }
  if (keep_graphs)
    out.graphs.emplace(std::move(triple.core), std::move(triple.g1));
  return out;
}

StabilityReport summarize_stability(std::vector<StabilityTrialResult> trials,
                                    double delta, std::uint32_t j) {
  if (trials.empty()) throw std::invalid_argument("need at least one trial");
  StabilityReport rep;
  rep.delta = delta;
  rep.j = j;
  std::uint64_t na = 0, nb = 0, nc = 0;
  std::vector<double> dxs, ghps;
  for (const auto& r : trials) {
    na += r.a_holds;
    nb += r.b_holds;
    nc += r.c_holds;
    dxs.push_back(r.x_l2_delta);
    if (!std::isnan(r.ghp_bound)) ghps.push_back(r.ghp_bound);
  }
  const double td = static_cast<double>(trials.size());
  rep.freq_a = na / td;
  rep.freq_b = nb / td;
  rep.freq_c = nc / td;
  rep.median_dx = median(dxs);
  rep.median_ghp = ghps.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : median(ghps);
  rep.trials = std::move(trials);
  return rep;
}

StabilityReport stability_diagnostics(const NoiseParams& params,
                                      std::uint64_t trials, double delta,
                                      std::uint32_t j,
                                      std::uint64_t master_seed) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  std::vector<StabilityTrialResult> rows;
  rows.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t)
    rows.push_back(run_stability_trial(params, delta, j, master_seed, t));
  return summarize_stability(std::move(rows), delta, j);
}

}  // namespace critnoise
