#include "critnoise/components.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace critnoise {

namespace {

// Union-find with path halving and union by size.
struct UnionFind {
  std::vector<Vertex> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(Vertex n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), Vertex{0});
  }

  Vertex find(Vertex v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

UnionFind build_forest(const Graph& g) {
  UnionFind uf(g.n);
  for (const auto& [u, v] : g.edges) uf.unite(u, v);
  return uf;
}

}  // namespace

ComponentDecomposition components(const Graph& g) {
  UnionFind uf = build_forest(g);
  ComponentDecomposition d;
  d.n = g.n;
  d.label.assign(g.n, 0);

  // Index roots in first-vertex order; that makes the size tie-break "smallest
  // contained vertex" a stable sort by size alone.
  std::vector<std::uint32_t> root_slot(g.n, ~0u);
  std::vector<std::uint32_t> slot_size;
  for (Vertex v = 0; v < g.n; ++v) {
    const Vertex r = uf.find(v);
    if (root_slot[r] == ~0u) {
      root_slot[r] = static_cast<std::uint32_t>(slot_size.size());
      slot_size.push_back(uf.size[r]);
    }
    d.label[v] = root_slot[r];
  }

  const std::size_t k = slot_size.size();
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return slot_size[a] > slot_size[b];
                   });

  std::vector<std::uint32_t> rank(k);
  d.sizes.resize(k);
  for (std::uint32_t pos = 0; pos < k; ++pos) {
    rank[order[pos]] = pos;
    d.sizes[pos] = slot_size[order[pos]];
  }
  for (Vertex v = 0; v < g.n; ++v) d.label[v] = rank[d.label[v]];

  d.offsets.assign(k + 1, 0);
  for (Vertex v = 0; v < g.n; ++v) ++d.offsets[d.label[v] + 1];
  for (std::size_t i = 1; i <= k; ++i) d.offsets[i] += d.offsets[i - 1];
  d.members.resize(g.n);
  std::vector<std::uint32_t> cursor(d.offsets.begin(), d.offsets.end() - 1);
  for (Vertex v = 0; v < g.n; ++v) d.members[cursor[d.label[v]]++] = v;
  return d;
}

std::uint32_t largest_component_size(const Graph& g) {
  if (g.n == 0) return 0;
  UnionFind uf(g.n);
  std::uint32_t best = 1;
  for (const auto& [u, v] : g.edges) {
    uf.unite(u, v);
    const std::uint32_t s = uf.size[uf.find(u)];
    if (s > best) best = s;
  }
  return best;
}

std::vector<std::uint32_t> component_sizes(const Graph& g) {
  UnionFind uf = build_forest(g);
  std::vector<std::uint32_t> sizes;
  for (Vertex v = 0; v < g.n; ++v)
    if (uf.find(v) == v) sizes.push_back(uf.size[v]);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

double susceptibility(const std::vector<std::uint32_t>& sizes, int r) {
  if (r < 1) throw std::invalid_argument("susceptibility needs r >= 1");
  double acc = 0.0;
  for (const std::uint32_t s : sizes) {
    double term = s;
    for (int k = 1; k < r; ++k) term *= s;
    acc += term;
  }
  return acc;
}

double susceptibility(const ComponentDecomposition& d, int r) {
  return susceptibility(d.sizes, r);
}

SizeVector size_vector(const std::vector<std::uint32_t>& sizes, Vertex n) {
  SizeVector x;
  x.scale = std::pow(static_cast<double>(n), -2.0 / 3.0);
  x.entries.reserve(sizes.size());
  for (const std::uint32_t s : sizes) x.entries.push_back(s * x.scale);
  return x;
}

SizeVector size_vector(const ComponentDecomposition& d) {
  return size_vector(d.sizes, d.n);
}

double l2_distance(const SizeVector& a, const SizeVector& b) {
  const std::size_t k = std::max(a.entries.size(), b.entries.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double av = i < a.entries.size() ? a.entries[i] : 0.0;
    const double bv = i < b.entries.size() ? b.entries[i] : 0.0;
    acc += (av - bv) * (av - bv);
  }
  return std::sqrt(acc);
}

double largest_component_center(std::uint64_t n, double theta) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("theta must lie in (0,1)");
  const double xi = theta * theta * theta * static_cast<double>(n);
  if (!(std::log(xi) > 1.0))
    throw std::invalid_argument("theta^3 n must exceed e");
  const double denom = -theta - std::log1p(-theta);
  return (std::log(xi) - 5.0 * std::log(std::log(xi))) / denom;
}

LargestComponentStats largest_component_stats(const ComponentDecomposition& d,
                                              double theta) {
  LargestComponentStats out;
  out.size = d.sizes.empty() ? 0 : d.sizes.front();
  out.center = largest_component_center(d.n, theta);
  return out;
}

}  // namespace critnoise
