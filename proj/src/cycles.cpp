#include "critnoise/cycles.hpp"

#include <algorithm>
#include <cstring>
#include <set>

namespace critnoise {

std::vector<Vertex> two_core(const Graph& g) {
  std::vector<std::uint32_t> deg(g.n, 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  const Adjacency adj(g);
  std::vector<Vertex> stack;
  std::vector<char> removed(g.n, 0);
  for (Vertex v = 0; v < g.n; ++v)
    if (deg[v] <= 1) {
      removed[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Vertex* w = adj.begin(v); w != adj.end(v); ++w) {
      if (removed[*w]) continue;
      if (--deg[*w] <= 1) {
        removed[*w] = 1;
        stack.push_back(*w);
      }
    }
  }
  std::vector<Vertex> core;
  for (Vertex v = 0; v < g.n; ++v)
    if (!removed[v]) core.push_back(v);
  return core;
}

namespace {

struct CoreGraph {
  std::vector<Vertex> verts;             // original labels
  std::vector<std::uint32_t> offsets;    // CSR over local labels
  std::vector<std::uint32_t> nbrs;
  std::vector<std::uint32_t> comp;       // local label -> component id
  std::uint32_t comp_count = 0;
};

CoreGraph build_core_graph(const Graph& g) {
  CoreGraph c;
  c.verts = two_core(g);
  std::vector<std::uint32_t> local(g.n, ~0u);
  for (std::uint32_t i = 0; i < c.verts.size(); ++i) local[c.verts[i]] = i;
  const std::uint32_t m = static_cast<std::uint32_t>(c.verts.size());
  c.offsets.assign(m + 1, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> kept;
  for (const auto& [u, v] : g.edges) {
    if (local[u] != ~0u && local[v] != ~0u) {
      kept.emplace_back(local[u], local[v]);
      ++c.offsets[local[u] + 1];
      ++c.offsets[local[v] + 1];
    }
  }
  for (std::uint32_t i = 1; i <= m; ++i) c.offsets[i] += c.offsets[i - 1];
  c.nbrs.resize(2 * kept.size());
  std::vector<std::uint32_t> cur(c.offsets.begin(), c.offsets.end() - 1);
  for (const auto& [a, b] : kept) {
    c.nbrs[cur[a]++] = b;
    c.nbrs[cur[b]++] = a;
  }
  c.comp.assign(m, ~0u);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < m; ++s) {
    if (c.comp[s] != ~0u) continue;
    const std::uint32_t id = c.comp_count++;
    c.comp[s] = id;
    queue.clear();
    queue.push_back(s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::uint32_t v = queue[h];
      for (std::uint32_t k = c.offsets[v]; k < c.offsets[v + 1]; ++k) {
        if (c.comp[c.nbrs[k]] == ~0u) {
          c.comp[c.nbrs[k]] = id;
          queue.push_back(c.nbrs[k]);
        }
      }
    }
  }
  return c;
}

// BFS from `root`.  Returns the minimum closed-walk length seen over
// non-tree edges; the minimum of that over all roots of a component is its
// girth (a genuine cycle length), individual root values may overestimate.
// When `fundamentals` is set, the true fundamental cycle lengths of this BFS
// tree are added to `out`.
std::uint32_t bfs_candidates(const CoreGraph& c, std::uint32_t root,
                             std::vector<std::uint32_t>& dist,
                             std::vector<std::uint32_t>& parent,
                             std::set<std::uint32_t>& out, bool fundamentals) {
  std::vector<std::uint32_t> queue{root};
  dist[root] = 0;
  parent[root] = root;
  std::uint32_t best = ~0u;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::uint32_t v = queue[h];
    for (std::uint32_t k = c.offsets[v]; k < c.offsets[v + 1]; ++k) {
      const std::uint32_t w = c.nbrs[k];
      if (dist[w] == ~0u) {
        dist[w] = dist[v] + 1;
        parent[w] = v;
        queue.push_back(w);
      } else if (w != parent[v] && v < w) {
        best = std::min(best, dist[v] + dist[w] + 1);
        if (fundamentals) {
          // Tree path between v and w plus the closing edge: a simple cycle.
          std::uint32_t a = v, b = w, len = 1;
          while (dist[a] > dist[b]) {
            a = parent[a];
            ++len;
          }
          while (dist[b] > dist[a]) {
            b = parent[b];
            ++len;
          }
          while (a != b) {
            a = parent[a];
            b = parent[b];
            len += 2;
          }
          if (len >= 3) out.insert(len);
        }
      }
    }
  }
  for (const std::uint32_t v : queue) {
    dist[v] = ~0u;
    parent[v] = ~0u;
  }
  return best;
}

// All simple cycle lengths: enumerate paths whose smallest vertex is the
// start.  Exponential, only used for components up to exact_cap vertices.
void enumerate_exact(const CoreGraph& c,
                     const std::vector<std::uint32_t>& verts,
                     std::set<std::uint32_t>& out) {
  std::vector<char> on_path(c.verts.size(), 0);
  struct Frame {
    std::uint32_t v;
    std::uint32_t next;
  };
  for (const std::uint32_t s : verts) {
    std::vector<Frame> stack;
    stack.push_back({s, c.offsets[s]});
    on_path[s] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == c.offsets[f.v + 1]) {
        on_path[f.v] = 0;
        stack.pop_back();
        continue;
      }
      const std::uint32_t w = c.nbrs[f.next++];
      if (w == s && stack.size() >= 3) {
        out.insert(static_cast<std::uint32_t>(stack.size()));
        continue;
      }
      if (w <= s || on_path[w]) continue;
      on_path[w] = 1;
      stack.push_back({w, c.offsets[w]});
    }
    on_path[s] = 0;
  }
}

}  // namespace

std::vector<std::uint32_t> cycle_length_candidates(const Graph& g,
                                                   std::uint32_t exact_cap) {
  const CoreGraph c = build_core_graph(g);
  const std::uint32_t m = static_cast<std::uint32_t>(c.verts.size());
  std::set<std::uint32_t> lengths;
  if (m == 0) return {};
  std::vector<std::uint32_t> comp_size(c.comp_count, 0);
  for (std::uint32_t v = 0; v < m; ++v) ++comp_size[c.comp[v]];
  std::vector<std::vector<std::uint32_t>> by_comp(c.comp_count);
  for (std::uint32_t v = 0; v < m; ++v) by_comp[c.comp[v]].push_back(v);
  std::vector<std::uint32_t> dist(m, ~0u), parent(m, ~0u);
  for (std::uint32_t id = 0; id < c.comp_count; ++id) {
    if (comp_size[id] <= exact_cap) {
      enumerate_exact(c, by_comp[id], lengths);
    } else {
      std::uint32_t girth = ~0u;
      bool first = true;
      for (const std::uint32_t v : by_comp[id]) {
        girth = std::min(
            girth, bfs_candidates(c, v, dist, parent, lengths, first));
        first = false;
      }
      if (girth != ~0u) lengths.insert(girth);
    }
  }
  return {lengths.begin(), lengths.end()};
}

bool has_cycle_in_range(const Graph& g, double lo, double hi,
                        std::uint32_t exact_cap) {
  for (const std::uint32_t l : cycle_length_candidates(g, exact_cap))
    if (static_cast<double>(l) > lo && static_cast<double>(l) < hi)
      return true;
  return false;
}

}  // namespace critnoise
