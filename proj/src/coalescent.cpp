#include "critnoise/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace critnoise {

namespace {

void check_weights(const std::vector<double>& x, double q) {
  if (x.empty()) throw std::invalid_argument("weight vector is empty");
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  for (const double v : x)
    if (!(v > 0.0)) throw std::invalid_argument("weights must be positive");
}

// Union-find over blocks, then order components by decreasing weight
// (exact ties by smallest block id).
void finish_weighted_graph(WeightedGraph& w) {
  const std::uint32_t m = static_cast<std::uint32_t>(w.x.size());
  std::vector<std::uint32_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const auto& [a, b] : w.edges) {
    const std::uint32_t ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::uint32_t> slot(m, ~0u);
  std::vector<double> weight;
  std::vector<std::uint32_t> first_block;
  std::vector<std::uint32_t> raw(m);
  for (std::uint32_t v = 0; v < m; ++v) {
    const std::uint32_t r = find(v);
    if (slot[r] == ~0u) {
      slot[r] = static_cast<std::uint32_t>(weight.size());
      weight.push_back(0.0);
      first_block.push_back(v);
    }
    raw[v] = slot[r];
    weight[slot[r]] += w.x[v];
  }
  const std::uint32_t k = static_cast<std::uint32_t>(weight.size());
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return first_block[a] < first_block[b];
  });
  std::vector<std::uint32_t> rank(k);
  w.component_weights.resize(k);
  for (std::uint32_t pos = 0; pos < k; ++pos) {
    rank[order[pos]] = pos;
    w.component_weights[pos] = weight[order[pos]];
  }
  w.comp_label.resize(m);
  for (std::uint32_t v = 0; v < m; ++v) w.comp_label[v] = rank[raw[v]];
}

double pair_probability(double q, double xa, double xb) {
  return -std::expm1(-q * xa * xb);
}

}  // namespace

CoalescentSetup coalescent_params(const Graph& core, double p1) {
  if (!(p1 > 0.0) || !(p1 < 1.0))
    throw std::invalid_argument("p1 must lie in (0,1)");
  CoalescentSetup s;
  s.n = core.n;
  s.decomp = components(core);
  const double scale = std::pow(static_cast<double>(core.n), -2.0 / 3.0);
  s.x.reserve(s.decomp.count());
  for (const std::uint32_t sz : s.decomp.sizes) s.x.push_back(sz * scale);
  s.q = std::pow(static_cast<double>(core.n), 4.0 / 3.0) * -std::log1p(-p1);

  // Induced subgraph per component, vertices relabelled by member order.
  std::vector<std::uint32_t> local(core.n);
  for (std::size_t j = 0; j < s.decomp.count(); ++j) {
    const auto mem = s.decomp.members_of(j);
    for (std::uint32_t i = 0; i < mem.size(); ++i) local[mem[i]] = i;
  }
  s.blocks.resize(s.decomp.count());
  for (std::size_t j = 0; j < s.decomp.count(); ++j)
    s.blocks[j].n = s.decomp.sizes[j];
  for (const auto& [u, v] : core.edges) {
    Graph& b = s.blocks[s.decomp.label[u]];
    const std::uint32_t lu = local[u], lv = local[v];
    b.edges.emplace_back(std::min(lu, lv), std::max(lu, lv));
  }
  for (Graph& b : s.blocks) std::sort(b.edges.begin(), b.edges.end());
  return s;
}

WeightedGraph sample_W_reference(const std::vector<double>& x, double q,
                                 Rng& rng) {
  check_weights(x, q);
  WeightedGraph w;
  w.x = x;
  w.q = q;
  const std::uint32_t m = static_cast<std::uint32_t>(x.size());
  for (std::uint32_t i = 0; i + 1 < m; ++i)
    for (std::uint32_t j = i + 1; j < m; ++j)
      if (rng.bernoulli(pair_probability(q, x[i], x[j])))
        w.edges.emplace_back(i, j);
  finish_weighted_graph(w);
  return w;
}

WeightedGraph sample_W(const std::vector<double>& x, double q, Rng& rng) {
  check_weights(x, q);
  WeightedGraph w;
  w.x = x;
  w.q = q;
  const std::uint32_t m = static_cast<std::uint32_t>(x.size());

  // Weight classes: indices carrying bit-identical weights, value-descending.
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return x[a] > x[b]; });
  std::vector<std::uint32_t> class_start;
  for (std::uint32_t i = 0; i < m; ++i)
    if (i == 0 || x[order[i]] != x[order[i - 1]]) class_start.push_back(i);
  class_start.push_back(m);
  const std::size_t nc = class_start.size() - 1;

  std::vector<std::uint64_t> picked;
  for (std::size_t a = 0; a < nc; ++a) {
    const std::uint32_t* ca = order.data() + class_start[a];
    const std::uint64_t na = class_start[a + 1] - class_start[a];
    const double va = x[ca[0]];
    for (std::size_t b = a; b < nc; ++b) {
      const std::uint32_t* cb = order.data() + class_start[b];
      const std::uint64_t nb = class_start[b + 1] - class_start[b];
      const double p = pair_probability(q, va, x[cb[0]]);
      const std::uint64_t pairs = (a == b) ? na * (na - 1) / 2 : na * nb;
      if (pairs == 0 || p <= 0.0) continue;
      const std::uint64_t hits =
          p >= 1.0 ? pairs : rng.binomial_exact(pairs, p);
      if (hits == 0) continue;
      // Floyd's sampling: `hits` distinct flat pair indices.
      picked.clear();
      std::unordered_set<std::uint64_t> seen;
      for (std::uint64_t t = pairs - hits; t < pairs; ++t) {
        const std::uint64_t r = rng.below(t + 1);
        if (seen.insert(r).second) {
          picked.push_back(r);
        } else {
          seen.insert(t);
          picked.push_back(t);
        }
      }
      for (const std::uint64_t flat : picked) {
        std::uint32_t bi, bj;
        if (a == b) {
          const auto [r, c] =
              edge_from_index(flat, static_cast<Vertex>(na));
          bi = ca[r];
          bj = ca[c];
        } else {
          bi = ca[flat / nb];
          bj = cb[flat % nb];
        }
        w.edges.emplace_back(std::min(bi, bj), std::max(bi, bj));
      }
    }
  }
  std::sort(w.edges.begin(), w.edges.end());
  finish_weighted_graph(w);
  return w;
}

BlowupGraph sample_WH(const std::vector<double>& x,
                      const std::vector<Graph>& blocks, double q, Rng& rng) {
  if (x.size() != blocks.size())
    throw std::invalid_argument("weights and blocks disagree");
  for (const Graph& b : blocks) {
    if (b.n == 0) throw std::invalid_argument("empty block");
    if (components(b).count() != 1)
      throw std::invalid_argument("block not connected");
  }
  BlowupGraph out;
  out.skeleton = sample_W(x, q, rng);
  out.block_offset.resize(blocks.size() + 1, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    out.block_offset[i + 1] = out.block_offset[i] + blocks[i].n;
  out.host.n = out.block_offset.back();
  out.block_of.resize(out.host.n);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::uint32_t v = out.block_offset[i]; v < out.block_offset[i + 1];
         ++v)
      out.block_of[v] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::uint32_t off = out.block_offset[i];
    for (const auto& [u, v] : blocks[i].edges)
      out.host.edges.emplace_back(off + u, off + v);
  }
  for (const auto& [bi, bj] : out.skeleton.edges) {
    const Vertex u =
        out.block_offset[bi] + static_cast<Vertex>(rng.below(blocks[bi].n));
    const Vertex v =
        out.block_offset[bj] + static_cast<Vertex>(rng.below(blocks[bj].n));
    out.host.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(out.host.edges.begin(), out.host.edges.end());
  return out;
}

BlowupGraph prune_excessive(const Graph& g0, const Graph& g1, double p1,
                            Rng& rng) {
  if (g0.n != g1.n) throw std::invalid_argument("vertex count mismatch");
  if (!std::includes(g1.edges.begin(), g1.edges.end(), g0.edges.begin(),
                     g0.edges.end()))
    throw std::invalid_argument("g0 is not a subgraph of g1");
  BlowupGraph out;
  const ComponentDecomposition d = components(g0);
  out.block_of = d.label;

  // Sprinkle edges between distinct core components, grouped by block pair
  // in deterministic key order.
  std::map<std::pair<std::uint32_t, std::uint32_t>, EdgeList> cross;
  for (const auto& e : g1.edges) {
    if (std::binary_search(g0.edges.begin(), g0.edges.end(), e)) continue;
    const std::uint32_t a = d.label[e.first], b = d.label[e.second];
    if (a == b) continue;  // internal excessive edge: dropped
    cross[{std::min(a, b), std::max(a, b)}].push_back(e);
  }
  EdgeList kept;
  EdgeList skeleton_edges;
  for (auto& [blocks, group] : cross) {
    skeleton_edges.emplace_back(blocks);
    kept.push_back(group.size() == 1
                       ? group[0]
                       : group[rng.below(group.size())]);
  }
  std::sort(kept.begin(), kept.end());
  out.host.n = g0.n;
  out.host.edges.resize(g0.edges.size() + kept.size());
  std::merge(g0.edges.begin(), g0.edges.end(), kept.begin(), kept.end(),
             out.host.edges.begin());

  const double scale = std::pow(static_cast<double>(g0.n), -2.0 / 3.0);
  out.skeleton.x.reserve(d.count());
  for (const std::uint32_t sz : d.sizes) out.skeleton.x.push_back(sz * scale);
  out.skeleton.q =
      std::pow(static_cast<double>(g0.n), 4.0 / 3.0) * -std::log1p(-p1);
  out.skeleton.edges = std::move(skeleton_edges);
  std::sort(out.skeleton.edges.begin(), out.skeleton.edges.end());
  finish_weighted_graph(out.skeleton);
  return out;
}

namespace {

struct Moments {
  double sigma2 = 0.0, sigma3 = 0.0, x_max = 0.0, x_min = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  m.x_min = x[0];
  for (const double v : x) {
    m.sigma2 += v * v;
    m.sigma3 += v * v * v;
    m.x_max = std::max(m.x_max, v);
    m.x_min = std::min(m.x_min, v);
  }
  return m;
}

}  // namespace

ConditionReport check_aldous_conditions(const std::vector<double>& x, double q,
                                        double lambda, double eps,
                                        std::uint64_t n) {
  check_weights(x, q);
  const double e3n = eps * eps * eps * static_cast<double>(n);
  if (!(e3n > 1.0))
    throw std::invalid_argument("eps^3 n must exceed 1");
  const Moments m = moments(x);
  ConditionReport r;
  r.sigma2 = m.sigma2;
  r.sigma3 = m.sigma3;
  r.x_max = m.x_max;
  r.x_min = m.x_min;
  r.q = q;
  r.eps = eps;
  r.n = n;
  auto add = [&r](std::string name, double lhs, double rhs) {
    r.checks.push_back({std::move(name), lhs, rhs, lhs < rhs});
  };
  add("third_moment_ratio",
      std::fabs(m.sigma3 / (m.sigma2 * m.sigma2 * m.sigma2) - 1.0),
      std::pow(e3n, -0.2));
  add("rate_offset", std::fabs(q - 1.0 / m.sigma2 - lambda),
      std::pow(e3n, -1.0 / 15.0));
  add("top_weight_fraction", m.x_max / m.sigma2,
      4.0 * std::pow(e3n, -1.0 / 3.0) * std::log(e3n));
  return r;
}

ConditionReport check_bbsw_conditions(const std::vector<double>& x,
                                      const std::vector<double>& u,
                                      double d_max, double q, double eps,
                                      std::uint64_t n, double eta0,
                                      double r0) {
  check_weights(x, q);
  if (u.size() != x.size())
    throw std::invalid_argument("mean-distance vector size mismatch");
  if (!(eta0 > 0.0) || !(eta0 < 0.5))
    throw std::invalid_argument("eta0 must lie in (0, 1/2)");
  const double e3n = eps * eps * eps * static_cast<double>(n);
  if (!(e3n > 1.0))
    throw std::invalid_argument("eps^3 n must exceed 1");
  const Moments m = moments(x);
  double sum_x2u = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum_x2u += x[i] * x[i] * u[i];
  const double s = m.sigma2 * m.sigma2 / (m.sigma2 + sum_x2u);

  ConditionReport r;
  r.sigma2 = m.sigma2;
  r.sigma3 = m.sigma3;
  r.x_max = m.x_max;
  r.x_min = m.x_min;
  r.d_max = d_max;
  r.sum_x2u = sum_x2u;
  r.q = q;
  r.scaling = s;
  r.eps = eps;
  r.n = n;
  auto add = [&r](std::string name, double lhs, double rhs) {
    r.checks.push_back({std::move(name), lhs, rhs, lhs < rhs});
  };
  const double log_e3n = std::log(e3n);
  const double small = 5.0 * std::pow(e3n, -(1.0 - 2.0 * eta0) / 6.0) * log_e3n;
  const double nd = static_cast<double>(n);
  add("top_weight_scaled", m.x_max / std::pow(m.sigma2, 1.5 + eta0), small);
  add("min_weight_floor", std::pow(m.sigma2, r0) / m.x_min,
      2.0 * std::pow(nd, -1.0 / 3.0));
  add("diameter_scaled",
      std::pow(m.sigma2, 1.5 - eta0) * d_max / (m.sigma2 + sum_x2u), small);
  add("diameter_mass_product",
      sum_x2u > 0.0 ? m.sigma2 * m.x_max * d_max / sum_x2u
                    : std::numeric_limits<double>::infinity(),
      std::min(10.0 * std::pow(e3n, -2.0 / 3.0) * log_e3n * log_e3n,
               std::pow(nd, -1.0 / 8.0)));
  add("length_rescaling_error", std::fabs(s * std::cbrt(nd) - 1.0),
      4.0 * std::pow(e3n, -0.4));
  return r;
}

double scaling_factor(const std::vector<double>& x,
                      const std::vector<double>& u) {
  if (x.empty() || u.size() != x.size())
    throw std::invalid_argument("size mismatch");
  double sigma2 = 0.0, sum_x2u = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw std::invalid_argument("weights must be positive");
    sigma2 += x[i] * x[i];
    sum_x2u += x[i] * x[i] * u[i];
  }
  return sigma2 * sigma2 / (sigma2 + sum_x2u);
}

}  // namespace critnoise
