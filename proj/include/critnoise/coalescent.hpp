#pragma once

// Multiplicative coalescent on rescaled component weights, its graph
// blow-up, the regularity conditions under which both converge, and the
// pruning map from a sprinkled pair down to a blow-up graph.
//
// Edge probability between blocks i and j is 1 - exp(-q x_i x_j); with
// x_i = n^(-2/3) |C_i| and q = n^(4/3) (-log(1-p1)) this equals
// 1 - (1-p1)^(|C_i||C_j|), the chance that a p1-sprinkle joins the blocks.

#include <cstdint>
#include <string>
#include <vector>

#include "critnoise/components.hpp"
#include "critnoise/graph.hpp"
#include "critnoise/rng.hpp"

namespace critnoise {

struct WeightedGraph {
  std::vector<double> x;  // block weights, decreasing
  double q = 0.0;
  EdgeList edges;  // block pairs (i, j), i < j, sorted
  std::vector<double> component_weights;  // decreasing
  std::vector<std::uint32_t> comp_label;  // block -> component rank
};

struct CoalescentSetup {
  std::uint64_t n = 0;
  std::vector<double> x;
  double q = 0.0;
  std::vector<Graph> blocks;  // induced component subgraphs, local labels
  ComponentDecomposition decomp;
};

CoalescentSetup coalescent_params(const Graph& core, double p1);

// One multiplicative-coalescent draw.  Blocks with identical weights are
// batched through exact binomial counts, so the cost is proportional to the
// number of weight classes plus the number of realized edges; the naive
// all-pairs reference is kept for distributional cross-checks.
WeightedGraph sample_W(const std::vector<double>& x, double q, Rng& rng);
WeightedGraph sample_W_reference(const std::vector<double>& x, double q,
                                 Rng& rng);

struct BlowupGraph {
  Graph host;
  std::vector<std::uint32_t> block_of;  // host vertex -> block
  WeightedGraph skeleton;
  // Vertex ranges per block when the host was assembled from block graphs
  // (sample_WH); empty when the host keeps its original labels (pruning).
  std::vector<std::uint32_t> block_offset;
};

// Blow-up draw: skeleton ~ sample_W, then each skeleton edge lands on an
// independent uniform endpoint pair.  Every block graph must be connected.
BlowupGraph sample_WH(const std::vector<double>& x,
                      const std::vector<Graph>& blocks, double q, Rng& rng);

// Remove sprinkle edges internal to a core component and collapse repeated
// sprinkle edges between the same component pair to one uniform survivor.
// Requires edges(g0) subset of edges(g1); p1 parametrizes the skeleton.
BlowupGraph prune_excessive(const Graph& g0, const Graph& g1, double p1,
                            Rng& rng);

struct ConditionCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;  // lhs < rhs, strict
};

struct ConditionReport {
  double sigma2 = 0.0, sigma3 = 0.0;
  double x_max = 0.0, x_min = 0.0;
  double d_max = 0.0;
  double sum_x2u = 0.0;
  double q = 0.0;
  double scaling = 0.0;
  double eps = 0.0;
  std::uint64_t n = 0;
  std::vector<ConditionCheck> checks;

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
};

// Convergence conditions for the weight vector alone:
//   |sigma3/sigma2^3 - 1|      < (eps^3 n)^(-1/5)
//   |q - 1/sigma2 - lambda|    < (eps^3 n)^(-1/15)
//   x_max/sigma2               < 4 (eps^3 n)^(-1/3) log(eps^3 n)
ConditionReport check_aldous_conditions(const std::vector<double>& x, double q,
                                        double lambda, double eps,
                                        std::uint64_t n);

// Conditions for the measured blow-up, with block mean distances u and the
// max block diameter d_max; eta0 in (0, 1/2), r0 a large fixed power.
ConditionReport check_bbsw_conditions(const std::vector<double>& x,
                                      const std::vector<double>& u,
                                      double d_max, double q, double eps,
                                      std::uint64_t n, double eta0 = 0.25,
                                      double r0 = 8.0);

// sigma2^2 / (sigma2 + sum x_i^2 u_i): the length rescaling that matches
// graph distance in the blow-up to n^(-1/3) graph distance.
double scaling_factor(const std::vector<double>& x,
                      const std::vector<double>& u);

}  // namespace critnoise
