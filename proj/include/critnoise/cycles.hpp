#pragma once

// Cycle length queries.  Candidate lengths come from per-root BFS (shortest
// cycle through each root) plus the fundamental cycles of a spanning tree;
// that can miss intermediate lengths, so small components are enumerated
// exactly instead.

#include <cstdint>
#include <vector>

#include "critnoise/graph.hpp"

namespace critnoise {

// Vertices surviving iterated removal of degree <= 1 vertices.
std::vector<Vertex> two_core(const Graph& g);

// Cycle lengths found in g: exact enumeration of all simple cycle lengths in
// two-core components with at most `exact_cap` vertices, BFS candidates
// elsewhere.  Sorted ascending, deduplicated.
std::vector<std::uint32_t> cycle_length_candidates(const Graph& g,
                                                   std::uint32_t exact_cap);

// Whether some cycle length l satisfies lo < l < hi (strict, graph units).
// Approximate for two-core components larger than exact_cap.
bool has_cycle_in_range(const Graph& g, double lo, double hi,
                        std::uint32_t exact_cap = 20);

}  // namespace critnoise
