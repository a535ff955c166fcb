#pragma once

// Connected components via union-find, rescaled component size vectors, and
// the subcritical largest-component law.

#include <cstdint>
#include <span>
#include <vector>

#include "critnoise/graph.hpp"

namespace critnoise {

// Components ordered by decreasing size, ties by smallest contained vertex.
// Membership is stored CSR-style to avoid per-component allocations.
struct ComponentDecomposition {
  Vertex n = 0;
  std::vector<std::uint32_t> label;    // vertex -> component rank
  std::vector<std::uint32_t> sizes;    // decreasing
  std::vector<std::uint32_t> offsets;  // size count()+1
  std::vector<Vertex> members;         // grouped by component, each ascending

  std::size_t count() const { return sizes.size(); }
  std::span<const Vertex> members_of(std::size_t j) const {
    return {members.data() + offsets[j], members.data() + offsets[j + 1]};
  }
};

ComponentDecomposition components(const Graph& g);

// Cheaper variants for hot Monte Carlo loops.
std::uint32_t largest_component_size(const Graph& g);
std::vector<std::uint32_t> component_sizes(const Graph& g);  // decreasing

// sum over components of size^r (r = 2 gives the susceptibility S2).
double susceptibility(const ComponentDecomposition& d, int r);
double susceptibility(const std::vector<std::uint32_t>& sizes, int r);

// Component sizes rescaled by n^(-2/3), decreasing.
struct SizeVector {
  std::vector<double> entries;
  double scale = 0.0;  // n^(-2/3)
};

SizeVector size_vector(const ComponentDecomposition& d);
SizeVector size_vector(const std::vector<std::uint32_t>& sizes, Vertex n);

// l2 distance after padding the shorter vector with zeros.
double l2_distance(const SizeVector& a, const SizeVector& b);

// Predicted center of |C1| for the subcritical core with 1 - n p0 = theta:
//   (log xi - 5 log log xi) / (-theta - log(1-theta)),  xi = theta^3 n.
// Requires xi > e so the double logarithm is positive.
double largest_component_center(std::uint64_t n, double theta);

struct LargestComponentStats {
  std::uint32_t size = 0;
  double center = 0.0;
};

LargestComponentStats largest_component_stats(const ComponentDecomposition& d,
                                              double theta);

}  // namespace critnoise
