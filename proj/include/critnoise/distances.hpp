#pragma once

// BFS distance statistics.  The per-component kernels are OpenMP-parallel
// with serial reference implementations kept for testing.

#include <cstdint>
#include <span>
#include <vector>

#include "critnoise/components.hpp"
#include "critnoise/graph.hpp"

namespace critnoise {

struct DistanceStats {
  // Per component, in decomposition order.  z counts ordered pairs
  // (diagonal included), so z = sum over all BFS rows within the component.
  std::vector<std::uint64_t> z;
  std::vector<double> u;  // z / size^2
  std::vector<std::uint32_t> diameters;
  std::uint32_t d_max = 0;
  std::uint64_t z_total = 0;
};

DistanceStats distance_stats(const Graph& g, const ComponentDecomposition& d);
DistanceStats distance_stats_serial(const Graph& g,
                                    const ComponentDecomposition& d);

// Number of vertices at each BFS level 0..k_max from u (level 0 is u itself).
std::vector<std::uint64_t> level_sizes(const Adjacency& adj, Vertex u,
                                       std::uint32_t k_max);

// Largest component diameter.  Tree components use a double BFS sweep,
// everything else falls back to all-source BFS.
std::uint32_t max_component_diameter(const Graph& g,
                                     const ComponentDecomposition& d);

// Exact diameter of component j alone.
std::uint32_t component_diameter(const Graph& g,
                                 const ComponentDecomposition& d,
                                 std::size_t j);

// Full BFS row from src; unreached vertices get UINT32_MAX.
void bfs_distances(const Adjacency& adj, Vertex src,
                   std::vector<std::uint32_t>& dist);

// True when no pair inside `set` is strictly closer in `super` than in `sub`.
// `set` must be one connected component of `sub`.
bool distances_preserved(const Adjacency& sub, const Adjacency& super,
                         std::span<const Vertex> set);

// Max over `probe` of the super-graph distance to the nearest vertex of
// `set`; UINT32_MAX if some probe vertex is unreachable from `set`.
std::uint32_t sup_distance_to_set(const Adjacency& super,
                                  std::span<const Vertex> set,
                                  std::span<const Vertex> probe);

}  // namespace critnoise
