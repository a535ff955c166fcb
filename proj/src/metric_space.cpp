#include "critnoise/metric_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace critnoise {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MeasuredMetricSpace MeasuredMetricSpace::dense(
    std::vector<double> dist_row_major, std::vector<double> mass) {
  MeasuredMetricSpace s;
  s.dense_ = true;
  if (dist_row_major.size() != mass.size() * mass.size())
    throw std::invalid_argument("distance matrix shape mismatch");
  for (const double m : mass)
    if (!(m > 0.0)) throw std::invalid_argument("masses must be positive");
  s.dist_ = std::move(dist_row_major);
  s.mass_ = std::move(mass);
  return s;
}

MeasuredMetricSpace MeasuredMetricSpace::graph_metric(
    std::vector<std::uint32_t> offsets, std::vector<Vertex> nbrs,
    double length_scale, std::vector<double> mass) {
  MeasuredMetricSpace s;
  s.dense_ = false;
  if (offsets.size() != mass.size() + 1)
    throw std::invalid_argument("offsets shape mismatch");
  if (!(length_scale > 0.0))
    throw std::invalid_argument("length scale must be positive");
  for (const double m : mass)
    if (!(m > 0.0)) throw std::invalid_argument("masses must be positive");
  s.offsets_ = std::move(offsets);
  s.nbrs_ = std::move(nbrs);
  s.length_scale_ = length_scale;
  s.mass_ = std::move(mass);
  return s;
}

double MeasuredMetricSpace::total_mass() const {
  double acc = 0.0;
  for (const double m : mass_) acc += m;
  return acc;
}

void MeasuredMetricSpace::distance_row(std::size_t i,
                                       std::vector<double>& out) const {
  const std::size_t n = size();
  out.assign(n, kInf);
  if (dense_) {
    for (std::size_t j = 0; j < n; ++j) out[j] = dist_[i * n + j];
    return;
  }
  std::vector<std::uint32_t> dist(n, ~0u);
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(i)};
  dist[i] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::uint32_t v = queue[h];
    for (std::uint32_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
      const std::uint32_t w = nbrs_[k];
      if (dist[w] == ~0u) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (dist[j] != ~0u) out[j] = dist[j] * length_scale_;
}

double MeasuredMetricSpace::distance(std::size_t i, std::size_t j) const {
  if (dense_) return dist_[i * size() + j];
  std::vector<double> row;
  distance_row(i, row);
  return row[j];
}

double MeasuredMetricSpace::excess_from(
    std::span<const std::size_t> from) const {
  const std::size_t n = size();
  if (from.empty()) throw std::invalid_argument("empty source set");
  if (dense_) {
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double best = kInf;
      for (const std::size_t i : from) best = std::min(best, dist_[i * n + j]);
      worst = std::max(worst, best);
    }
    return worst;
  }
  std::vector<std::uint32_t> dist(n, ~0u);
  std::vector<std::uint32_t> queue;
  for (const std::size_t i : from) {
    dist[i] = 0;
    queue.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::uint32_t v = queue[h];
    for (std::uint32_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
      const std::uint32_t w = nbrs_[k];
      if (dist[w] == ~0u) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  std::uint32_t worst = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (dist[j] == ~0u) return kInf;
    worst = std::max(worst, dist[j]);
  }
  return worst * length_scale_;
}

std::vector<double> MeasuredMetricSpace::dense_matrix(std::size_t cap) const {
  const std::size_t n = size();
  if (n > cap) throw std::invalid_argument("space too large to materialize");
  if (dense_) return dist_;
  std::vector<double> out(n * n, kInf);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    distance_row(i, row);
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = row[j];
  }
  return out;
}

void MeasuredMetricSpace::validate(double tol) const {
  const std::size_t n = size();
  if (n == 0) throw std::invalid_argument("empty space");
  if (!dense_) {
    // BFS distances satisfy the axioms by construction; connectivity is the
    // only thing that can fail.
    std::vector<double> row;
    distance_row(0, row);
    for (const double d : row)
      if (d == kInf) throw std::invalid_argument("space is disconnected");
    return;
  }
  auto at = [&](std::size_t i, std::size_t j) { return dist_[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(at(i, i)) > tol)
      throw std::invalid_argument("nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (at(i, j) < -tol) throw std::invalid_argument("negative distance");
      if (std::fabs(at(i, j) - at(j, i)) > tol)
        throw std::invalid_argument("asymmetric distances");
    }
  }
  if (n <= 64) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (at(i, j) > at(i, k) + at(k, j) + tol)
            throw std::invalid_argument("triangle inequality violated");
    return;
  }
  // Deterministic sample of triples.
  std::size_t i = 1, j = 2, k = 3;
  for (int t = 0; t < 4096; ++t) {
    i = (i * 193 + 7) % n;
    j = (j * 389 + 11) % n;
    k = (k * 769 + 13) % n;
    if (at(i, j) > at(i, k) + at(k, j) + tol)
      throw std::invalid_argument("triangle inequality violated");
  }
}

MeasuredMetricSpace extract_space(const Graph& g,
                                  const ComponentDecomposition& d,
                                  std::size_t j, double length_scale,
                                  double mass_per_point,
                                  std::size_t dense_cap) {
  if (j >= d.count()) throw std::out_of_range("component index");
  const auto mem = d.members_of(j);
  const std::size_t m = mem.size();
  std::vector<std::uint32_t> local(g.n, ~0u);
  for (std::uint32_t i = 0; i < m; ++i) local[mem[i]] = i;
  std::vector<std::uint32_t> offsets(m + 1, 0);
  EdgeList inner;
  for (const auto& [u, v] : g.edges) {
    if (d.label[u] != j) continue;
    inner.emplace_back(local[u], local[v]);
    ++offsets[local[u] + 1];
    ++offsets[local[v] + 1];
  }
  for (std::size_t i = 1; i <= m; ++i) offsets[i] += offsets[i - 1];
  std::vector<Vertex> nbrs(2 * inner.size());
  std::vector<std::uint32_t> cur(offsets.begin(), offsets.end() - 1);
  for (const auto& [a, b] : inner) {
    nbrs[cur[a]++] = b;
    nbrs[cur[b]++] = a;
  }
  std::vector<double> mass(m, mass_per_point);
  MeasuredMetricSpace s = MeasuredMetricSpace::graph_metric(
      std::move(offsets), std::move(nbrs), length_scale, std::move(mass));
  if (m <= dense_cap) {
    std::vector<double> mat = s.dense_matrix(dense_cap);
    std::vector<double> mass2(m, mass_per_point);
    return MeasuredMetricSpace::dense(std::move(mat), std::move(mass2));
  }
  return s;
}

namespace {

// Bipartite max-flow (Edmonds-Karp) between point masses, middle arcs
// restricted to the pair set `allowed`.
class PairFlow {
 public:
  PairFlow(const std::vector<double>& mu, const std::vector<double>& nu)
      : ma_(mu.size()), mb_(nu.size()), mu_(mu), nu_(nu) {}

  double max_flow(std::uint64_t allowed) const {
    const std::size_t src = ma_ + mb_, snk = src + 1, nn = snk + 1;
    std::vector<std::vector<double>> cap(nn, std::vector<double>(nn, 0.0));
    for (std::size_t i = 0; i < ma_; ++i) cap[src][i] = mu_[i];
    for (std::size_t j = 0; j < mb_; ++j) cap[ma_ + j][snk] = nu_[j];
    double big = 0.0;
    for (const double v : mu_) big += v;
    for (std::size_t i = 0; i < ma_; ++i)
      for (std::size_t j = 0; j < mb_; ++j)
        if (allowed >> (i * mb_ + j) & 1) cap[i][ma_ + j] = big + 1.0;
    double flow = 0.0;
    std::vector<int> prev(nn);
    for (;;) {
      std::fill(prev.begin(), prev.end(), -1);
      prev[src] = static_cast<int>(src);
      std::vector<std::size_t> queue{src};
      for (std::size_t h = 0; h < queue.size() && prev[snk] < 0; ++h) {
        const std::size_t v = queue[h];
        for (std::size_t w = 0; w < nn; ++w)
          if (prev[w] < 0 && cap[v][w] > 0.0) {
            prev[w] = static_cast<int>(v);
            queue.push_back(w);
          }
      }
      if (prev[snk] < 0) break;
      double bott = kInf;
      for (std::size_t v = snk; v != src; v = prev[v])
        bott = std::min(bott, cap[prev[v]][v]);
      for (std::size_t v = snk; v != src; v = prev[v]) {
        cap[prev[v]][v] -= bott;
        cap[v][prev[v]] += bott;
      }
      flow += bott;
    }
    return flow;
  }

 private:
  std::size_t ma_, mb_;
  std::vector<double> mu_, nu_;
};

// Max flow over conflict-free pair subsets: branch and bound over the
// conflict graph, pruning with the monotone flow upper bound.
class BestFlowSearch {
 public:
  BestFlowSearch(const PairFlow& flow,
                 const std::vector<std::uint64_t>& conflict)
      : flow_(flow), conflict_(conflict) {}

  double run(std::uint64_t all_pairs) {
    best_ = 0.0;
    dfs(0, all_pairs);
    return best_;
  }

 private:
  void dfs(std::uint64_t included, std::uint64_t candidate) {
    const double ub = flow_.max_flow(included | candidate);
    if (ub <= best_ + 1e-15) return;
    // Branch on a candidate pair still in conflict with another candidate.
    std::uint64_t rest = candidate;
    int branch = -1;
    while (rest) {
      const int p = std::countr_zero(rest);
      rest &= rest - 1;
      if (conflict_[p] & (candidate | included)) {
        branch = p;
        break;
      }
    }
    if (branch < 0) {
      best_ = std::max(best_, ub);
      return;
    }
    const std::uint64_t bit = 1ull << branch;
    if (!(conflict_[branch] & included))
      dfs(included | bit, (candidate & ~bit) & ~conflict_[branch]);
    dfs(included, candidate & ~bit);
  }

  const PairFlow& flow_;
  const std::vector<std::uint64_t>& conflict_;
  double best_ = 0.0;
};

}  // namespace

double ghp_exact(const MeasuredMetricSpace& a, const MeasuredMetricSpace& b,
                 std::size_t cap) {
  const std::size_t ma = a.size(), mb = b.size();
  if (ma > cap || mb > cap)
    throw std::invalid_argument("ghp_exact point cap exceeded");
  if (ma * mb > 64) throw std::invalid_argument("pair table exceeds 64");
  const std::vector<double> da = a.dense_matrix();
  const std::vector<double> db = b.dense_matrix();
  std::vector<double> mu(ma), nu(mb);
  for (std::size_t i = 0; i < ma; ++i) mu[i] = a.mass(i);
  for (std::size_t j = 0; j < mb; ++j) nu[j] = b.mass(j);
  const double total_a = std::accumulate(mu.begin(), mu.end(), 0.0);
  const double total_b = std::accumulate(nu.begin(), nu.end(), 0.0);
  const double big = std::max(total_a, total_b);

  const std::size_t np = ma * mb;
  // |d_a(i,i') - d_b(j,j')| / 2 for the pair-of-pairs table.
  std::vector<double> gap(np * np);
  for (std::size_t p = 0; p < np; ++p) {
    const std::size_t i = p / mb, j = p % mb;
    for (std::size_t p2 = 0; p2 < np; ++p2) {
      const std::size_t i2 = p2 / mb, j2 = p2 % mb;
      gap[p * np + p2] =
          std::fabs(da[i * ma + i2] - db[j * mb + j2]) / 2.0;
    }
  }
  std::vector<double> thresholds(gap);
  thresholds.push_back(0.0);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const PairFlow flow(mu, nu);
  const std::uint64_t all_pairs =
      np == 64 ? ~0ull : (1ull << np) - 1;
  auto defect = [&](double t) {
    std::vector<std::uint64_t> conflict(np, 0);
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t p2 = 0; p2 < np; ++p2)
        if (p != p2 && gap[p * np + p2] > t)
          conflict[p] |= 1ull << p2;
    BestFlowSearch search(flow, conflict);
    return big - search.run(all_pairs);
  };

  // g(t) = defect at distortion budget t is non-increasing; minimize
  // max(t, g(t)) by locating the crossing.
  std::size_t lo = 0, hi = thresholds.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (thresholds[mid] >= defect(thresholds[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  double best = kInf;
  if (lo < thresholds.size())
    best = std::max(thresholds[lo], defect(thresholds[lo]));
  if (lo > 0) {
    const double t = thresholds[lo - 1];
    best = std::min(best, std::max(t, defect(t)));
  }
  return best;
}

double ghp_upper_embedded(const MeasuredMetricSpace& sub,
                          const MeasuredMetricSpace& super,
                          std::span<const std::size_t> embedding, double tol) {
  const std::size_t ms = sub.size();
  if (embedding.size() != ms)
    throw std::invalid_argument("embedding size mismatch");
  std::vector<char> hit(super.size(), 0);
  for (const std::size_t t : embedding) {
    if (t >= super.size()) throw std::invalid_argument("embedding out of range");
    if (hit[t]) throw std::invalid_argument("embedding not injective");
    hit[t] = 1;
  }
  for (std::size_t i = 0; i < ms; ++i)
    if (sub.mass(i) > super.mass(embedding[i]) + tol)
      throw std::invalid_argument("masses not compatible");
  const double extra = super.total_mass() - sub.total_mass();
  if (extra < -tol) throw std::invalid_argument("super has less total mass");

  // Isometry: exhaustive on small spaces, evenly spaced sources otherwise.
  std::vector<double> row_sub, row_super;
  const std::size_t stride = ms <= 64 ? 1 : (ms + 63) / 64;
  for (std::size_t i = 0; i < ms; i += stride) {
    sub.distance_row(i, row_sub);
    super.distance_row(embedding[i], row_super);
    for (std::size_t j = 0; j < ms; ++j)
      if (std::fabs(row_sub[j] - row_super[embedding[j]]) > tol)
        throw std::invalid_argument("embedding is not isometric");
  }

  std::vector<std::size_t> image(embedding.begin(), embedding.end());
  const double excess = super.excess_from(image);
  return std::max(excess, std::max(extra, 0.0));
}

double ghp_upper_same_points(const MeasuredMetricSpace& a,
                             const MeasuredMetricSpace& b, double tol) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("point sets differ in size");
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(a.mass(i) - b.mass(i)) > tol)
      throw std::invalid_argument("per-point masses differ");
  double worst = 0.0;
  std::vector<double> ra, rb;
  for (std::size_t i = 0; i < n; ++i) {
    a.distance_row(i, ra);
    b.distance_row(i, rb);
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::fabs(ra[j] - rb[j]));
  }
  return worst / 2.0;
}

GhpAggregate ghp_aggregate(const std::vector<MeasuredMetricSpace>& a,
                           const std::vector<MeasuredMetricSpace>& b, double p,
                           GhpMode mode) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  GhpAggregate out;
  out.mode = mode;
  const std::size_t k = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < k; ++i) {
    double d;
    if (i >= a.size())
      d = b[i].total_mass();  // matched against the empty space
    else if (i >= b.size())
      d = a[i].total_mass();
    else
      d = ghp_exact(a[i], b[i]);
    out.per_pair.push_back(d);
  }
  out.value = lp_aggregate(out.per_pair, p);
  return out;
}

double lp_aggregate(const std::vector<double>& values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  double acc = 0.0;
  for (const double v : values) acc += std::pow(std::fabs(v), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace critnoise
