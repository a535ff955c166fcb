#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "critnoise/components.hpp"
#include "critnoise/distances.hpp"
#include "critnoise/graph.hpp"
#include "critnoise/rng.hpp"
#include "critnoise/sampling.hpp"

using namespace critnoise;

namespace {

// Reference decomposition by repeated BFS, ordered like the library claims:
// decreasing size, ties broken by smallest contained vertex.
std::vector<std::vector<Vertex>> bfs_components(const Graph& g) {
  Adjacency adj(g);
  std::vector<bool> seen(g.n, false);
  std::vector<std::vector<Vertex>> comps;
  for (Vertex s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp;
    std::queue<Vertex> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const Vertex v = q.front();
      q.pop();
      comp.push_back(v);
      for (const Vertex* w = adj.begin(v); w != adj.end(v); ++w)
        if (!seen[*w]) {
          seen[*w] = true;
          q.push(*w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });
  return comps;
}

std::vector<std::vector<std::uint32_t>> all_pairs_bfs(const Graph& g) {
  Adjacency adj(g);
  std::vector<std::vector<std::uint32_t>> dist(g.n);
  for (Vertex s = 0; s < g.n; ++s) bfs_distances(adj, s, dist[s]);
  return dist;
}

Graph random_graph(Vertex n, double p, std::uint64_t seed) {
  Rng rng(seed);
  Graph g{n, {}};
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) g.edges.emplace_back(i, j);
  return g;
}

// Random attachment tree on n vertices.
Graph random_tree(Vertex n, std::uint64_t seed) {
  Rng rng(seed);
  Graph g{n, {}};
  for (Vertex v = 1; v < n; ++v) {
    const Vertex u = static_cast<Vertex>(rng.below(v));
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace

TEST_CASE("union-find decomposition matches a BFS reference") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const double p = (seed % 8) / 8.0 * 0.15 + 0.01;
    const Graph g = random_graph(30, p, 7000 + seed);
    const ComponentDecomposition d = components(g);
    const auto ref = bfs_components(g);
    REQUIRE(d.count() == ref.size());
    for (std::size_t j = 0; j < ref.size(); ++j) {
      CHECK(d.sizes[j] == ref[j].size());
      const auto mem = d.members_of(j);
      REQUIRE(mem.size() == ref[j].size());
      for (std::size_t i = 0; i < mem.size(); ++i) CHECK(mem[i] == ref[j][i]);
      for (const Vertex v : ref[j]) CHECK(d.label[v] == j);
    }
    CHECK(largest_component_size(g) == (d.count() ? d.sizes.front() : 0));
    CHECK(component_sizes(g) == d.sizes);
  }
}

TEST_CASE("edgeless and complete graphs decompose as expected") {
  const Graph empty{5, {}};
  const ComponentDecomposition de = components(empty);
  CHECK(de.count() == 5);
  CHECK(de.sizes == std::vector<std::uint32_t>{1, 1, 1, 1, 1});
  CHECK(de.members_of(0).front() == 0);

  Graph full{4, {}};
  for (Vertex i = 0; i < 4; ++i)
    for (Vertex j = i + 1; j < 4; ++j) full.edges.emplace_back(i, j);
  const ComponentDecomposition df = components(full);
  CHECK(df.count() == 1);
  CHECK(df.sizes.front() == 4);
}

TEST_CASE("susceptibility sums powers of component sizes") {
  const Graph g{6, {{0, 1}, {1, 2}, {3, 4}}};  // sizes 3, 2, 1
  const ComponentDecomposition d = components(g);
  CHECK(susceptibility(d, 1) == 6.0);
  CHECK(susceptibility(d, 2) == 9.0 + 4.0 + 1.0);
  CHECK(susceptibility(d, 3) == 27.0 + 8.0 + 1.0);
  CHECK(susceptibility(d.sizes, 2) == 14.0);
  CHECK_THROWS(susceptibility(d, 0));
}

TEST_CASE("size vectors rescale by n^(-2/3) and pad for the l2 gap") {
  const std::vector<std::uint32_t> sizes = {8, 1};
  const SizeVector x = size_vector(sizes, 64);
  CHECK(x.scale == doctest::Approx(std::pow(64.0, -2.0 / 3.0)));
  CHECK(x.entries.size() == 2);
  CHECK(x.entries[0] == doctest::Approx(0.5));
  CHECK(x.entries[1] == doctest::Approx(0.0625));

  const SizeVector y = size_vector(std::vector<std::uint32_t>{8}, 64);
  CHECK(l2_distance(x, y) == doctest::Approx(0.0625));
  CHECK(l2_distance(x, x) == 0.0);
  const SizeVector empty = size_vector(std::vector<std::uint32_t>{}, 64);
  CHECK(l2_distance(x, empty) ==
        doctest::Approx(std::sqrt(0.25 + 0.0625 * 0.0625)));
}

TEST_CASE("distance stats match an all-pairs oracle") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const double p = (seed % 6) / 6.0 * 0.12 + 0.02;
    const Graph g = random_graph(40, p, 8100 + seed);
    const ComponentDecomposition d = components(g);
    const DistanceStats st = distance_stats(g, d);
    const auto dist = all_pairs_bfs(g);

    REQUIRE(st.z.size() == d.count());
    std::uint64_t z_total = 0;
    std::uint32_t d_max = 0;
    for (std::size_t j = 0; j < d.count(); ++j) {
      std::uint64_t z = 0;
      std::uint32_t diam = 0;
      for (const Vertex a : d.members_of(j))
        for (const Vertex b : d.members_of(j)) {
          z += dist[a][b];
          diam = std::max(diam, dist[a][b]);
        }
      CHECK(st.z[j] == z);
      CHECK(st.diameters[j] == diam);
      CHECK(st.u[j] ==
            doctest::Approx(z / std::pow(double(d.sizes[j]), 2.0)));
      z_total += z;
      d_max = std::max(d_max, diam);
    }
    CHECK(st.z_total == z_total);
    CHECK(st.d_max == d_max);
    CHECK(max_component_diameter(g, d) == d_max);
  }
}

TEST_CASE("hand-checked distance sums") {
  {
    const Graph g{2, {{0, 1}}};
    const ComponentDecomposition d = components(g);
    const DistanceStats st = distance_stats(g, d);
    CHECK(st.z.front() == 2);  // ordered pairs
    CHECK(st.u.front() == doctest::Approx(0.5));
    CHECK(st.diameters.front() == 1);
  }
  {
    const Graph g{3, {{0, 1}, {1, 2}}};
    const ComponentDecomposition d = components(g);
    const DistanceStats st = distance_stats(g, d);
    CHECK(st.z.front() == 8);
    CHECK(st.diameters.front() == 2);
  }
}

TEST_CASE("parallel and serial distance kernels agree exactly") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(60, 0.04, 8200 + seed);
    const ComponentDecomposition d = components(g);
    const DistanceStats a = distance_stats(g, d);
    const DistanceStats b = distance_stats_serial(g, d);
    CHECK(a.z == b.z);
    CHECK(a.diameters == b.diameters);
    CHECK(a.d_max == b.d_max);
    CHECK(a.z_total == b.z_total);
    for (std::size_t j = 0; j < a.u.size(); ++j)
      CHECK(a.u[j] == b.u[j]);
  }
}

TEST_CASE("tree diameters take the double-sweep path correctly") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = random_tree(50, 8300 + seed);
    const ComponentDecomposition d = components(g);
    REQUIRE(d.count() == 1);
    const auto dist = all_pairs_bfs(g);
    std::uint32_t diam = 0;
    for (Vertex a = 0; a < g.n; ++a)
      for (Vertex b = 0; b < g.n; ++b) diam = std::max(diam, dist[a][b]);
    CHECK(max_component_diameter(g, d) == diam);
    CHECK(component_diameter(g, d, 0) == diam);
  }
}

TEST_CASE("per-component diameter isolates the requested component") {
  // Path of 4 (diameter 3), triangle (diameter 1), isolated vertex.
  const Graph g{8, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {4, 6}, {5, 6}}};
  const ComponentDecomposition d = components(g);
  REQUIRE(d.count() == 3);
  CHECK(component_diameter(g, d, 0) == 3);
  CHECK(component_diameter(g, d, 1) == 1);
  CHECK(component_diameter(g, d, 2) == 0);
}

TEST_CASE("bfs level sizes count spheres") {
  // Star with one pendant path: 0-1, 0-2, 0-3, 3-4.
  const Graph g{5, {{0, 1}, {0, 2}, {0, 3}, {3, 4}}};
  Adjacency adj(g);
  const auto levels = level_sizes(adj, 0, 3);
  REQUIRE(levels.size() == 4);
  CHECK(levels[0] == 1);
  CHECK(levels[1] == 3);
  CHECK(levels[2] == 1);
  CHECK(levels[3] == 0);
  const auto from_leaf = level_sizes(adj, 4, 2);
  CHECK(from_leaf[0] == 1);
  CHECK(from_leaf[1] == 1);
  CHECK(from_leaf[2] == 1);
}

TEST_CASE("bfs rows flag unreachable vertices") {
  const Graph g{4, {{0, 1}, {2, 3}}};
  Adjacency adj(g);
  std::vector<std::uint32_t> dist;
  bfs_distances(adj, 0, dist);
  CHECK(dist[0] == 0);
  CHECK(dist[1] == 1);
  CHECK(dist[2] == UINT32_MAX);
  CHECK(dist[3] == UINT32_MAX);
}

TEST_CASE("distance preservation detects shortcuts and ignores growth") {
  const Graph path{5, {{0, 1}, {1, 2}, {2, 3}}};
  const ComponentDecomposition d = components(path);
  const auto set = d.members_of(0);
  Adjacency sub(path);

  const Graph grown{5, {{0, 1}, {0, 4}, {1, 2}, {2, 3}}};
  Adjacency grown_adj(grown);
  CHECK(distances_preserved(sub, grown_adj, set));

  const Graph shortcut{5, {{0, 1}, {0, 3}, {1, 2}, {2, 3}}};
  Adjacency shortcut_adj(shortcut);
  CHECK_FALSE(distances_preserved(sub, shortcut_adj, set));
}

TEST_CASE("distance preservation agrees with the oracle on random pairs") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Graph g0 = random_graph(24, 0.06, 8400 + seed);
    Rng rng(999000 + seed);
    Graph g1 = g0;
    for (Vertex i = 0; i < g1.n; ++i)
      for (Vertex j = i + 1; j < g1.n; ++j)
        if (rng.bernoulli(0.01)) g1.edges.emplace_back(i, j);
    std::sort(g1.edges.begin(), g1.edges.end());
    g1.edges.erase(std::unique(g1.edges.begin(), g1.edges.end()),
                   g1.edges.end());

    const ComponentDecomposition d0 = components(g0);
    const auto dist0 = all_pairs_bfs(g0);
    const auto dist1 = all_pairs_bfs(g1);
    Adjacency a0(g0), a1(g1);
    const auto set = d0.members_of(0);
    bool expect = true;
    for (const Vertex a : set)
      for (const Vertex b : set)
        if (dist1[a][b] != dist0[a][b]) expect = false;
    CHECK(distances_preserved(a0, a1, set) == expect);
  }
}

TEST_CASE("sup distance to a set is a multi-source BFS") {
  const Graph g{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}};
  Adjacency adj(g);
  const std::vector<Vertex> set = {0};
  const std::vector<Vertex> probe = {2, 4};
  CHECK(sup_distance_to_set(adj, set, probe) == 4);
  const std::vector<Vertex> set2 = {0, 3};
  CHECK(sup_distance_to_set(adj, set2, probe) == 1);
  const Graph split{3, {{0, 1}}};
  Adjacency sadj(split);
  const std::vector<Vertex> probe2 = {2};
  const std::vector<Vertex> just0 = {0};
  CHECK(sup_distance_to_set(sadj, just0, probe2) == UINT32_MAX);
}

TEST_CASE("subcritical center formula and stats wrapper") {
  // theta = 0.1, n = 1e6: xi = 1000.
  const double center = largest_component_center(1000000, 0.1);
  const double rate = -0.1 - std::log1p(-0.1);
  const double xi = 1000.0;
  CHECK(center == doctest::Approx(
                      (std::log(xi) - 5.0 * std::log(std::log(xi))) / rate));
  CHECK_THROWS(largest_component_center(100, 0.1));  // xi too small

  const Graph g{1000000, {{0, 1}, {1, 2}, {3, 4}}};
  const ComponentDecomposition d = components(g);
  const LargestComponentStats st = largest_component_stats(d, 0.1);
  CHECK(st.size == 3);
  CHECK(st.center == doctest::Approx(center));
}
