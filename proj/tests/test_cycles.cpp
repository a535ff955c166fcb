#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "critnoise/cycles.hpp"
#include "critnoise/graph.hpp"
#include "critnoise/rng.hpp"

using namespace critnoise;

namespace {

// Independent recursive enumeration of all simple cycle lengths: grow paths
// whose anchor is their smallest vertex; a neighbor equal to the anchor at
// depth >= 3 closes a cycle.
void grow(const std::vector<std::vector<Vertex>>& adj, Vertex anchor, Vertex v,
          std::vector<bool>& used, std::uint32_t depth,
          std::set<std::uint32_t>& lengths) {
  for (const Vertex w : adj[v]) {
    if (w == anchor && depth >= 3) lengths.insert(depth);
    if (w <= anchor || used[w]) continue;
    used[w] = true;
    grow(adj, anchor, w, used, depth + 1, lengths);
    used[w] = false;
  }
}

std::vector<std::uint32_t> oracle_cycle_lengths(const Graph& g) {
  std::vector<std::vector<Vertex>> adj(g.n);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::set<std::uint32_t> lengths;
  std::vector<bool> used(g.n, false);
  for (Vertex s = 0; s < g.n; ++s) {
    used[s] = true;
    grow(adj, s, s, used, 1, lengths);
    used[s] = false;
  }
  return {lengths.begin(), lengths.end()};
}

Graph random_graph(Vertex n, double p, std::uint64_t seed) {
  Rng rng(seed);
  Graph g{n, {}};
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) g.edges.emplace_back(i, j);
  return g;
}

}  // namespace

TEST_CASE("two-core strips trees and keeps cycles") {
  const Graph tree{5, {{0, 1}, {0, 2}, {2, 3}, {2, 4}}};
  CHECK(two_core(tree).empty());

  const Graph lollipop{5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}}};
  CHECK(two_core(lollipop) == std::vector<Vertex>{0, 1, 2});

  // Two vertices joined by three disjoint paths; everything survives.
  const Graph theta{6, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 5},
                        {4, 5}}};
  CHECK(two_core(theta).size() == 6);
}

TEST_CASE("hand-checked cycle spectra") {
  const Graph triangle{3, {{0, 1}, {0, 2}, {1, 2}}};
  CHECK(cycle_length_candidates(triangle, 20) ==
        std::vector<std::uint32_t>{3});

  const Graph c5{5, {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}};
  CHECK(cycle_length_candidates(c5, 20) == std::vector<std::uint32_t>{5});

  const Graph forest{6, {{0, 1}, {1, 2}, {3, 4}}};
  CHECK(cycle_length_candidates(forest, 20).empty());

  Graph k4{4, {}};
  for (Vertex i = 0; i < 4; ++i)
    for (Vertex j = i + 1; j < 4; ++j) k4.edges.emplace_back(i, j);
  CHECK(cycle_length_candidates(k4, 20) == std::vector<std::uint32_t>{3, 4});

  const Graph bowtie{5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}};
  CHECK(cycle_length_candidates(bowtie, 20) == std::vector<std::uint32_t>{3});

  // Paths of lengths 2, 2, 3 between the same endpoints: cycles 4 and 5.
  const Graph theta{6, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 5},
                        {4, 5}}};
  CHECK(cycle_length_candidates(theta, 20) ==
        std::vector<std::uint32_t>{4, 5});
}

TEST_CASE("exact enumeration matches the recursive oracle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const double p = (seed % 10) / 10.0 * 0.25 + 0.05;
    const Graph g = random_graph(12, p, 43000 + seed);
    CHECK(cycle_length_candidates(g, 20) == oracle_cycle_lengths(g));
  }
}

TEST_CASE("approximate candidates only report realizable lengths") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const double p = (seed % 10) / 10.0 * 0.25 + 0.05;
    const Graph g = random_graph(12, p, 44000 + seed);
    const auto exact = oracle_cycle_lengths(g);
    for (const std::uint32_t l : cycle_length_candidates(g, 0))
      CHECK(std::binary_search(exact.begin(), exact.end(), l));
    // The girth itself is always found.
    if (!exact.empty()) {
      const auto approx = cycle_length_candidates(g, 0);
      REQUIRE_FALSE(approx.empty());
      CHECK(approx.front() == exact.front());
    }
  }
}

TEST_CASE("cycle range queries use strict open bounds") {
  const Graph triangle{3, {{0, 1}, {0, 2}, {1, 2}}};
  CHECK(has_cycle_in_range(triangle, 2.9, 3.1));
  CHECK_FALSE(has_cycle_in_range(triangle, 3.0, 4.0));
  CHECK_FALSE(has_cycle_in_range(triangle, 2.0, 3.0));
  CHECK_FALSE(has_cycle_in_range(triangle, 3.5, 7.0));
  const Graph forest{4, {{0, 1}, {2, 3}}};
  CHECK_FALSE(has_cycle_in_range(forest, 0.0, 100.0));
}
