#include "critnoise/distances.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace critnoise {

namespace {

// Reusable BFS workspace; `stamp` avoids clearing dist between sources.
struct Scratch {
  std::vector<std::uint32_t> dist;
  std::vector<std::uint32_t> stamp;
  std::vector<Vertex> queue;
  std::uint32_t epoch = 0;

  void ensure(std::size_t n) {
    if (dist.size() < n) {
      dist.resize(n);
      stamp.assign(n, 0);
      epoch = 0;
    }
  }

  void begin() { ++epoch; }
  bool seen(Vertex v) const { return stamp[v] == epoch; }
  void visit(Vertex v, std::uint32_t d) {
    stamp[v] = epoch;
    dist[v] = d;
  }
};

struct RowResult {
  std::uint64_t sum;
  std::uint32_t ecc;
};

RowResult bfs_row(const Adjacency& adj, Vertex src, Scratch& s) {
  s.begin();
  s.visit(src, 0);
  s.queue.clear();
  s.queue.push_back(src);
  std::uint64_t sum = 0;
  std::uint32_t ecc = 0;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const Vertex v = s.queue[head];
    const std::uint32_t dv = s.dist[v];
    sum += dv;
    if (dv > ecc) ecc = dv;
    for (const Vertex* w = adj.begin(v); w != adj.end(v); ++w) {
      if (!s.seen(*w)) {
        s.visit(*w, dv + 1);
        s.queue.push_back(*w);
      }
    }
  }
  return {sum, ecc};
}

void component_stats(const Adjacency& adj, const ComponentDecomposition& d,
                     std::size_t j, Scratch& s, std::uint64_t& z,
                     std::uint32_t& diam) {
  const auto mem = d.members_of(j);
  if (mem.size() == 1) {
    z = 0;
    diam = 0;
    return;
  }
  if (mem.size() == 2) {
    z = 2;
    diam = 1;
    return;
  }
  z = 0;
  diam = 0;
  for (const Vertex v : mem) {
    const RowResult r = bfs_row(adj, v, s);
    z += r.sum;
    if (r.ecc > diam) diam = r.ecc;
  }
}

DistanceStats finalize(const ComponentDecomposition& d, DistanceStats st) {
  st.u.resize(d.count());
  st.z_total = 0;
  st.d_max = 0;
  for (std::size_t j = 0; j < d.count(); ++j) {
    const double sz = d.sizes[j];
    st.u[j] = static_cast<double>(st.z[j]) / (sz * sz);
    st.z_total += st.z[j];
    if (st.diameters[j] > st.d_max) st.d_max = st.diameters[j];
  }
  return st;
}

}  // namespace

DistanceStats distance_stats_serial(const Graph& g,
                                    const ComponentDecomposition& d) {
  const Adjacency adj(g);
  DistanceStats st;
  st.z.assign(d.count(), 0);
  st.diameters.assign(d.count(), 0);
  Scratch s;
  s.ensure(g.n);
  for (std::size_t j = 0; j < d.count(); ++j)
    component_stats(adj, d, j, s, st.z[j], st.diameters[j]);
  return finalize(d, std::move(st));
}

DistanceStats distance_stats(const Graph& g, const ComponentDecomposition& d) {
  const Adjacency adj(g);
  DistanceStats st;
  st.z.assign(d.count(), 0);
  st.diameters.assign(d.count(), 0);
  const std::int64_t k = static_cast<std::int64_t>(d.count());
#pragma omp parallel
  {
    Scratch s;
    s.ensure(g.n);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t j = 0; j < k; ++j)
      component_stats(adj, d, static_cast<std::size_t>(j), s, st.z[j],
                      st.diameters[j]);
  }
  return finalize(d, std::move(st));
}

std::vector<std::uint64_t> level_sizes(const Adjacency& adj, Vertex u,
                                       std::uint32_t k_max) {
  std::vector<std::uint64_t> levels(static_cast<std::size_t>(k_max) + 1, 0);
  Scratch s;
  s.ensure(adj.offsets.size() - 1);
  s.begin();
  s.visit(u, 0);
  s.queue.clear();
  s.queue.push_back(u);
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const Vertex v = s.queue[head];
    const std::uint32_t dv = s.dist[v];
    ++levels[dv];
    if (dv == k_max) continue;
    for (const Vertex* w = adj.begin(v); w != adj.end(v); ++w) {
      if (!s.seen(*w)) {
        s.visit(*w, dv + 1);
        s.queue.push_back(*w);
      }
    }
  }
  return levels;
}

std::uint32_t max_component_diameter(const Graph& g,
                                     const ComponentDecomposition& d) {
  const Adjacency adj(g);
  std::vector<std::uint64_t> comp_edges(d.count(), 0);
  for (const auto& [u, v] : g.edges) ++comp_edges[d.label[u]];
  std::uint32_t best = 0;
  const std::int64_t k = static_cast<std::int64_t>(d.count());
#pragma omp parallel reduction(max : best)
  {
    Scratch s;
    s.ensure(g.n);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t j = 0; j < k; ++j) {
      const auto mem = d.members_of(static_cast<std::size_t>(j));
      if (mem.size() <= 2) {
        best = std::max(best, static_cast<std::uint32_t>(mem.size() - 1));
        continue;
      }
      std::uint32_t diam;
      if (comp_edges[j] == mem.size() - 1) {
        // Tree: double sweep is exact.
        RowResult r1 = bfs_row(adj, mem[0], s);
        Vertex far = mem[0];
        for (const Vertex v : mem)
          if (s.dist[v] == r1.ecc) {
            far = v;
            break;
          }
        diam = bfs_row(adj, far, s).ecc;
      } else {
        std::uint64_t z;
        component_stats(adj, d, static_cast<std::size_t>(j), s, z, diam);
      }
      best = std::max(best, diam);
    }
  }
  return best;
}

std::uint32_t component_diameter(const Graph& g,
                                 const ComponentDecomposition& d,
                                 std::size_t j) {
  if (j >= d.count()) throw std::out_of_range("component index");
  const auto mem = d.members_of(j);
  if (mem.size() <= 2) return static_cast<std::uint32_t>(mem.size() - 1);
  const Adjacency adj(g);
  std::uint64_t comp_edges = 0;
  for (const auto& [u, v] : g.edges)
    if (d.label[u] == j) ++comp_edges;
  Scratch s;
  s.ensure(g.n);
  if (comp_edges == mem.size() - 1) {
    const RowResult r1 = bfs_row(adj, mem[0], s);
    Vertex far = mem[0];
    for (const Vertex v : mem)
      if (s.dist[v] == r1.ecc) {
        far = v;
        break;
      }
    return bfs_row(adj, far, s).ecc;
  }
  std::uint64_t z;
  std::uint32_t diam;
  component_stats(adj, d, j, s, z, diam);
  return diam;
}

void bfs_distances(const Adjacency& adj, Vertex src,
                   std::vector<std::uint32_t>& dist) {
  const std::size_t n = adj.offsets.size() - 1;
  dist.assign(n, ~0u);
  std::vector<Vertex> queue;
  queue.push_back(src);
  dist[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (const Vertex* w = adj.begin(v); w != adj.end(v); ++w) {
      if (dist[*w] == ~0u) {
        dist[*w] = dist[v] + 1;
        queue.push_back(*w);
      }
    }
  }
}

namespace {

// Distance-row sum from src to every vertex of the set, where `in_set` marks
// membership with `mark`; stops once all `want` members are seen.  Distances
// in a supergraph can only shrink, so two equal sums mean equal rows.
std::uint64_t row_sum_over_set(const Adjacency& adj, Vertex src,
                               const std::vector<std::uint32_t>& in_set,
                               std::uint32_t mark, std::size_t want,
                               Scratch& s) {
  s.begin();
  s.visit(src, 0);
  s.queue.clear();
  s.queue.push_back(src);
  std::uint64_t sum = 0;
  std::size_t hit = in_set[src] == mark ? 1 : 0;
  for (std::size_t head = 0; head < s.queue.size() && hit < want; ++head) {
    const Vertex v = s.queue[head];
    for (const Vertex* w = adj.begin(v); w != adj.end(v); ++w) {
      if (!s.seen(*w)) {
        s.visit(*w, s.dist[v] + 1);
        s.queue.push_back(*w);
        if (in_set[*w] == mark) {
          sum += s.dist[*w];
          ++hit;
        }
      }
    }
  }
  if (hit < want) return ~0ull;  // disconnected in super: cannot happen
  return sum;
}

}  // namespace

bool distances_preserved(const Adjacency& sub, const Adjacency& super,
                         std::span<const Vertex> set) {
  const std::size_t n = sub.offsets.size() - 1;
  std::vector<std::uint32_t> in_set(n, 0);
  for (const Vertex v : set) in_set[v] = 1;
  const std::int64_t k = static_cast<std::int64_t>(set.size());
  bool ok = true;
#pragma omp parallel reduction(&& : ok)
  {
    Scratch ssub, ssup;
    ssub.ensure(n);
    ssup.ensure(n);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < k; ++i) {
      if (!ok) continue;
      const Vertex src = set[static_cast<std::size_t>(i)];
      const std::uint64_t s0 =
          row_sum_over_set(sub, src, in_set, 1, set.size(), ssub);
      const std::uint64_t s1 =
          row_sum_over_set(super, src, in_set, 1, set.size(), ssup);
      if (s1 != s0) ok = false;
    }
  }
  return ok;
}

std::uint32_t sup_distance_to_set(const Adjacency& super,
                                  std::span<const Vertex> set,
                                  std::span<const Vertex> probe) {
  const std::size_t n = super.offsets.size() - 1;
  std::vector<std::uint32_t> dist(n, ~0u);
  std::vector<Vertex> queue;
  queue.reserve(set.size());
  for (const Vertex v : set) {
    dist[v] = 0;
    queue.push_back(v);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (const Vertex* w = super.begin(v); w != super.end(v); ++w) {
      if (dist[*w] == ~0u) {
        dist[*w] = dist[v] + 1;
        queue.push_back(*w);
      }
    }
  }
  std::uint32_t worst = 0;
  for (const Vertex v : probe) {
    if (dist[v] == ~0u) return ~0u;
    worst = std::max(worst, dist[v]);
  }
  return worst;
}

}  // namespace critnoise
