#include "critnoise/subcritical.hpp"

#include <cmath>
#include <stdexcept>

#include "critnoise/components.hpp"
#include "critnoise/distances.hpp"
#include "critnoise/sampling.hpp"
#include "critnoise/stats.hpp"

namespace critnoise {

SubcriticalSummary subcritical_stats(std::uint64_t n, double theta,
                                     double lambda, std::uint64_t trials,
                                     std::uint64_t master_seed,
                                     const SubcriticalOptions& opt) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const NoiseParams params = noise_params_from_theta(n, lambda, theta);
  const double nd = static_cast<double>(n);
  SubcriticalSummary out;
  out.n = n;
  out.theta = theta;
  out.trials = trials;
  out.pred_s2 = nd / theta;
  out.pred_s3 = nd / (theta * theta * theta);
  out.pred_z = (1.0 - theta) / (theta * theta) * nd;
  out.var_z_cap = 10.0 * nd / std::pow(theta, 7.0);
  out.center_c1 = largest_component_center(n, theta);
  out.c1_halfwidth = 5.0 / (-theta - std::log1p(-theta));
  out.diam_bound =
      (std::log(params.xi()) + 10.0) / (-std::log1p(-theta));

  std::vector<double> s2s, s3s, zs, c1s;
  std::uint64_t diam_ok = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = derive_stream(master_seed, t, StreamPurpose::core);
    const Graph g = sample_gnp(static_cast<Vertex>(n), params.p0, rng);
    if (opt.z_stats) {
      const ComponentDecomposition d = components(g);
      const DistanceStats st = distance_stats(g, d);
      zs.push_back(static_cast<double>(st.z_total));
      if (opt.moments) {
        s2s.push_back(susceptibility(d, 2));
        s3s.push_back(susceptibility(d, 3));
      }
      if (opt.extremes) {
        c1s.push_back(d.sizes.empty() ? 0.0 : d.sizes.front());
        diam_ok += static_cast<double>(st.d_max) < out.diam_bound;
      }
    } else if (opt.extremes) {
      const ComponentDecomposition d = components(g);
      c1s.push_back(d.sizes.empty() ? 0.0 : d.sizes.front());
      diam_ok +=
          static_cast<double>(max_component_diameter(g, d)) < out.diam_bound;
      if (opt.moments) {
        s2s.push_back(susceptibility(d, 2));
        s3s.push_back(susceptibility(d, 3));
      }
    } else if (opt.moments) {
      const std::vector<std::uint32_t> sizes = component_sizes(g);
      s2s.push_back(susceptibility(sizes, 2));
      s3s.push_back(susceptibility(sizes, 3));
    }
  }
  if (!s2s.empty()) {
    out.mean_s2 = mean(s2s);
    out.mean_s3 = mean(s3s);
  }
  if (!zs.empty()) {
    out.mean_z = mean(zs);
    out.var_z = zs.size() > 1 ? sample_variance(zs) : 0.0;
  }
  if (!c1s.empty()) {
    out.median_c1 = median(c1s);
    out.diam_within_frac =
        static_cast<double>(diam_ok) / static_cast<double>(trials);
  }
  return out;
}

std::vector<LevelMean> level_mean_profile(std::uint64_t n, double theta,
                                          double lambda, std::uint64_t graphs,
                                          std::uint64_t roots_per_graph,
                                          std::uint32_t k_max,
                                          std::uint64_t master_seed) {
  if (graphs < 2) throw std::invalid_argument("need at least two graphs");
  if (roots_per_graph == 0) throw std::invalid_argument("need roots");
  const NoiseParams params = noise_params_from_theta(n, lambda, theta);
  const double nd = static_cast<double>(n);

  // graph_means[g][k]: mean X_k over this graph's roots.
  std::vector<std::vector<double>> graph_means(
      graphs, std::vector<double>(k_max + 1, 0.0));
  for (std::uint64_t gi = 0; gi < graphs; ++gi) {
    Rng rng = derive_stream(master_seed, gi, StreamPurpose::core);
    const Graph g = sample_gnp(static_cast<Vertex>(n), params.p0, rng);
    const Adjacency adj(g);
    Rng roots = derive_stream(master_seed, gi, StreamPurpose::misc);
    for (std::uint64_t r = 0; r < roots_per_graph; ++r) {
      const Vertex u = static_cast<Vertex>(roots.below(n));
      const std::vector<std::uint64_t> levels = level_sizes(adj, u, k_max);
      for (std::uint32_t k = 0; k <= k_max; ++k)
        graph_means[gi][k] += static_cast<double>(levels[k]);
    }
    for (std::uint32_t k = 0; k <= k_max; ++k)
      graph_means[gi][k] /= static_cast<double>(roots_per_graph);
  }

  std::vector<LevelMean> out(k_max + 1);
  std::vector<double> col(graphs);
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    for (std::uint64_t gi = 0; gi < graphs; ++gi) col[gi] = graph_means[gi][k];
    out[k].k = k;
    out[k].mean = mean(col);
    out[k].std_err =
        std::sqrt(sample_variance(col) / static_cast<double>(graphs));
    const double base = std::pow(1.0 - theta, static_cast<double>(k));
    out[k].hi = base;
    out[k].lo = base - 3.0 * static_cast<double>(k) * static_cast<double>(k) *
                           base * (1.0 - theta) / (theta * nd);
  }
  return out;
}

}  // namespace critnoise
