#pragma once

// Boolean graph observables over the rescaled component structure.

#include <cstdint>
#include <string>

#include "critnoise/components.hpp"
#include "critnoise/graph.hpp"

namespace critnoise {

enum class ObservableKind {
  size_threshold,      // |C_rank| >= a * n^(2/3)
  diameter_threshold,  // diam(C_rank) >= a * n^(1/3)
  cycle_in_range,      // some cycle length in (a n^(1/3), b n^(1/3))
  l2_ball,             // ||X(g) - reference||_2 <= radius
};

struct Observable {
  ObservableKind kind = ObservableKind::size_threshold;
  std::uint32_t rank = 1;  // 1-based component rank
  double a = 0.0;
  double b = 0.0;
  SizeVector reference;
  double radius = 0.0;

  static Observable size_threshold(std::uint32_t rank, double a);
  static Observable diameter_threshold(std::uint32_t rank, double a);
  static Observable cycle_in_range(double a, double b);
  static Observable l2_ball(SizeVector reference, double radius);
};

bool evaluate(const Observable& f, const Graph& g);

// Fast path when the caller already has the decreasing component sizes;
// only size_threshold and l2_ball can use it.
bool evaluate_from_sizes(const Observable& f,
                         const std::vector<std::uint32_t>& sizes, Vertex n);

std::string observable_name(const Observable& f);

}  // namespace critnoise
