#pragma once

// Simple undirected graph on vertices 0..n-1 with a canonical sorted edge
// list, plus the row-major pair indexing used by the skip samplers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace critnoise {

using Vertex = std::uint32_t;
using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

struct Graph {
  Vertex n = 0;
  EdgeList edges;  // each (u, v) with u < v, sorted lexicographically

  bool is_canonical() const;
  std::uint64_t edge_count() const { return edges.size(); }
};

// Total number of vertex pairs.
inline std::uint64_t pair_count(Vertex n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

// Row-major index of the pair (i, j), i < j.
inline std::uint64_t edge_index(Vertex i, Vertex j, Vertex n) {
  const std::uint64_t i64 = i;
  return i64 * n - i64 * (i64 + 1) / 2 + (j - i - 1);
}

// Inverse of edge_index.
std::pair<Vertex, Vertex> edge_from_index(std::uint64_t idx, Vertex n);

// CSR adjacency built once per graph.
struct Adjacency {
  std::vector<std::uint32_t> offsets;  // size n + 1
  std::vector<Vertex> nbrs;

  explicit Adjacency(const Graph& g);
  std::uint32_t degree(Vertex v) const { return offsets[v + 1] - offsets[v]; }
  const Vertex* begin(Vertex v) const { return nbrs.data() + offsets[v]; }
  const Vertex* end(Vertex v) const { return nbrs.data() + offsets[v + 1]; }
};

// Edge-list file format: first line "n m", then one "i j" line per edge
// with i < j, ASCII decimal, sorted.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);
void write_edge_list_file(const std::string& path, const Graph& g);
Graph read_edge_list_file(const std::string& path);

}  // namespace critnoise
