#include "critnoise/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace critnoise {

bool Graph::is_canonical() const {
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& [u, v] = edges[k];
    if (u >= v || v >= n) return false;
    if (k > 0 && !(edges[k - 1] < edges[k])) return false;
  }
  return true;
}

std::pair<Vertex, Vertex> edge_from_index(std::uint64_t idx, Vertex n) {
  if (idx >= pair_count(n)) throw std::out_of_range("edge index out of range");
  // Closed-form guess, then an exact integer correction.
  const double nd = static_cast<double>(n) - 0.5;
  const double disc = nd * nd - 2.0 * static_cast<double>(idx);
  std::int64_t i =
      static_cast<std::int64_t>(nd - std::sqrt(disc > 0 ? disc : 0));
  if (i < 0) i = 0;
  if (i > n - 2) i = n - 2;
  auto offset = [n](std::int64_t a) {
    const std::uint64_t a64 = static_cast<std::uint64_t>(a);
    return a64 * n - a64 * (a64 + 1) / 2;
  };
  while (i > 0 && offset(i) > idx) --i;
  while (i < n - 2 && offset(i + 1) <= idx) ++i;
  const Vertex iu = static_cast<Vertex>(i);
  const Vertex j = static_cast<Vertex>(idx - offset(i) + iu + 1);
  return {iu, j};
}

Adjacency::Adjacency(const Graph& g) {
  offsets.assign(static_cast<std::size_t>(g.n) + 1, 0);
  for (const auto& [u, v] : g.edges) {
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  nbrs.resize(2 * g.edges.size());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : g.edges) {
    nbrs[cursor[u]++] = v;
    nbrs[cursor[v]++] = u;
  }
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  Graph g;
  std::uint64_t m = 0;
  if (!(in >> g.n >> m)) throw std::runtime_error("bad edge-list header");
  g.edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    Vertex u, v;
    if (!(in >> u >> v)) throw std::runtime_error("truncated edge list");
    g.edges.emplace_back(u, v);
  }
  if (!g.is_canonical()) throw std::runtime_error("edge list not canonical");
  return g;
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_edge_list(out, g);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in);
}

}  // namespace critnoise
