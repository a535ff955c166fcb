#include "critnoise/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critnoise {

namespace {

void check_common(std::uint64_t n, double p, double eps) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("edge probability must lie in (0,1)");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("eps must lie in [0,1]");
}

NoiseParams fill(std::uint64_t n, double lambda, double p, double eps) {
  NoiseParams out;
  out.n = n;
  out.lambda = lambda;
  out.eps = eps;
  out.p = p;
  out.p0 = p * (1.0 - eps) / (1.0 - eps * p);
  out.p1 = eps * p;
  out.theta = 1.0 - static_cast<double>(n) * out.p0;
  return out;
}

}  // namespace

NoiseParams derive_noise_params(std::uint64_t n, double lambda, double eps) {
  const double nd = static_cast<double>(n);
  const double p = (1.0 + lambda * std::pow(nd, -1.0 / 3.0)) / nd;
  check_common(n, p, eps);
  return fill(n, lambda, p, eps);
}

NoiseParams noise_params_from_p(std::uint64_t n, double p, double eps) {
  check_common(n, p, eps);
  const double nd = static_cast<double>(n);
  const double lambda = (p * nd - 1.0) * std::cbrt(nd);
  return fill(n, lambda, p, eps);
}

NoiseParams noise_params_from_theta(std::uint64_t n, double lambda,
                                    double theta) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("theta must lie in (0,1)");
  const double nd = static_cast<double>(n);
  const double p = (1.0 + lambda * std::pow(nd, -1.0 / 3.0)) / nd;
  const double c = (1.0 - theta) / nd;  // target p0
  const double eps = (p - c) / (p * (1.0 - c));
  check_common(n, p, eps);
  NoiseParams out = fill(n, lambda, p, eps);
  // Pin the derived quantities to the requested theta exactly.
  out.p0 = c;
  out.theta = theta;
  return out;
}

Graph sample_gnp(Vertex n, double p, Rng& rng) {
  Graph g;
  g.n = n;
  if (n < 2 || p <= 0.0) return g;
  const std::uint64_t total = pair_count(n);
  if (p >= 1.0) {
    g.edges.reserve(total);
    for (Vertex i = 0; i + 1 < n; ++i)
      for (Vertex j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
  }
  const double log1m_p = std::log1p(-p);
  std::uint64_t pos = 0;
  for (;;) {
    const std::uint64_t skip = rng.geometric_skip(log1m_p);
    if (skip >= total - pos) break;
    pos += skip;
    g.edges.push_back(edge_from_index(pos, n));
    if (++pos >= total) break;
  }
  return g;
}

namespace {

// Pairs absent from `exclude` hit at rate p; appended to `out` in order.
void sample_additions(Vertex n, double p, const Graph& exclude, Rng& rng,
                      EdgeList& out) {
  if (p <= 0.0) return;
  const std::uint64_t total = pair_count(n);
  const double log1m_p = std::log1p(-p);
  std::uint64_t pos = 0;
  for (;;) {
    const std::uint64_t skip = rng.geometric_skip(log1m_p);
    if (skip >= total - pos) break;
    pos += skip;
    const auto e = edge_from_index(pos, n);
    if (!std::binary_search(exclude.edges.begin(), exclude.edges.end(), e))
      out.push_back(e);
    if (++pos >= total) break;
  }
}

}  // namespace

Graph apply_noise(const Graph& g, const NoiseParams& params, Rng& rng) {
  if (g.n != params.n) throw std::invalid_argument("graph size mismatch");
  if (params.eps == 0.0) return g;
  Graph out;
  out.n = g.n;
  const double keep = 1.0 - params.eps * (1.0 - params.p);
  EdgeList kept;
  kept.reserve(g.edges.size());
  for (const auto& e : g.edges)
    if (rng.bernoulli(keep)) kept.push_back(e);
  EdgeList added;
  sample_additions(g.n, params.p1, g, rng, added);
  out.edges.resize(kept.size() + added.size());
  std::merge(kept.begin(), kept.end(), added.begin(), added.end(),
             out.edges.begin());
  return out;
}

Graph sprinkle_onto(const Graph& core, double p1, Rng& rng) {
  Graph out;
  out.n = core.n;
  EdgeList added;
  sample_additions(core.n, p1, core, rng, added);
  out.edges.resize(core.edges.size() + added.size());
  std::merge(core.edges.begin(), core.edges.end(), added.begin(), added.end(),
             out.edges.begin());
  return out;
}

SprinklingTriple sample_sprinkling_triple(const NoiseParams& params,
                                          Rng& core_rng, Rng& s1_rng,
                                          Rng& s2_rng) {
  SprinklingTriple t;
  t.core = sample_gnp(static_cast<Vertex>(params.n), params.p0, core_rng);
  t.g1 = sprinkle_onto(t.core, params.p1, s1_rng);
  t.g1_eps = sprinkle_onto(t.core, params.p1, s2_rng);
  return t;
}

SprinklingTriple sample_sprinkling_triple(const NoiseParams& params,
                                          std::uint64_t master_seed,
                                          std::uint64_t trial_id) {
  Rng core = derive_stream(master_seed, trial_id, StreamPurpose::core);
  Rng s1 = derive_stream(master_seed, trial_id, StreamPurpose::sprinkle1);
  Rng s2 = derive_stream(master_seed, trial_id, StreamPurpose::sprinkle2);
  return sample_sprinkling_triple(params, core, s1, s2);
}

}  // namespace critnoise
