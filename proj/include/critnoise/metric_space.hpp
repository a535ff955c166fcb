#pragma once

// Finite measured metric spaces and Gromov-Hausdorff-Prokhorov comparisons.
//
// ghp_exact minimizes max(dis(R)/2, mass defect) over correspondences R,
// where the defect given R is (larger total mass) - (max sub-coupling mass
// supported on R); the inner problem is a bipartite max-flow, the outer one
// a search over distortion thresholds.  Mass mismatch is charged through the
// uncoupled remainder, so two single points with masses 1 and 2 are at
// distance 1, and the distance to an empty space is the total mass.

#include <cstdint>
#include <span>
#include <vector>

#include "critnoise/components.hpp"
#include "critnoise/graph.hpp"

namespace critnoise {

// Either a dense distance matrix or an implicit graph metric (BFS distances
// times a length scale); the latter avoids materializing all-pairs tables
// for large components.
class MeasuredMetricSpace {
 public:
  MeasuredMetricSpace() = default;

  static MeasuredMetricSpace dense(std::vector<double> dist_row_major,
                                   std::vector<double> mass);
  static MeasuredMetricSpace graph_metric(std::vector<std::uint32_t> offsets,
                                          std::vector<Vertex> nbrs,
                                          double length_scale,
                                          std::vector<double> mass);

  std::size_t size() const { return mass_.size(); }
  bool is_dense() const { return dense_; }
  double mass(std::size_t i) const { return mass_[i]; }
  double total_mass() const;
  double length_scale() const { return length_scale_; }

  // Dense lookup, or one BFS for implicit spaces.
  double distance(std::size_t i, std::size_t j) const;
  void distance_row(std::size_t i, std::vector<double>& out) const;

  // Max over all points of the distance to the nearest of `from`.
  double excess_from(std::span<const std::size_t> from) const;

  // Dense matrix copy (implicit spaces are materialized; guarded by cap).
  std::vector<double> dense_matrix(std::size_t cap = 4096) const;

  // Metric axioms: nonnegativity, zero diagonal, symmetry, triangle
  // inequality.  Exhaustive up to 64 points, deterministically sampled
  // beyond that.  Throws on violation beyond tol.
  void validate(double tol = 1e-9) const;

 private:
  bool dense_ = true;
  std::vector<double> dist_;  // dense, row-major
  std::vector<std::uint32_t> offsets_;
  std::vector<Vertex> nbrs_;
  double length_scale_ = 1.0;
  std::vector<double> mass_;
};

// The j-th component of g as a measured metric space: graph distance times
// length_scale, mass_per_point on each vertex.  Dense when the component
// has at most dense_cap vertices, implicit otherwise.
MeasuredMetricSpace extract_space(const Graph& g,
                                  const ComponentDecomposition& d,
                                  std::size_t j, double length_scale,
                                  double mass_per_point,
                                  std::size_t dense_cap = 512);

// Exact distance for spaces of at most `cap` points (default 8).
double ghp_exact(const MeasuredMetricSpace& a, const MeasuredMetricSpace& b,
                 std::size_t cap = 8);

// Upper bound when sub embeds isometrically into super with compatible
// masses (embedding[i] = index in super): max of the Hausdorff excess of
// super over the image and the extra mass.  The embedding preconditions are
// verified exhaustively up to 64 points and by deterministic sampling above.
double ghp_upper_embedded(const MeasuredMetricSpace& sub,
                          const MeasuredMetricSpace& super,
                          std::span<const std::size_t> embedding,
                          double tol = 1e-9);

// Upper bound for two metrics on the same point set with equal per-point
// masses, via the identity correspondence: half the largest pairwise
// distance discrepancy.
double ghp_upper_same_points(const MeasuredMetricSpace& a,
                             const MeasuredMetricSpace& b, double tol = 1e-9);

enum class GhpMode { exact };

struct GhpAggregate {
  double value = 0.0;
  GhpMode mode = GhpMode::exact;
  std::vector<double> per_pair;
};

// l^p aggregate of per-pair distances; the shorter sequence is padded with
// empty spaces, so unmatched spaces contribute their total mass.
GhpAggregate ghp_aggregate(const std::vector<MeasuredMetricSpace>& a,
                           const std::vector<MeasuredMetricSpace>& b, double p,
                           GhpMode mode = GhpMode::exact);

double lp_aggregate(const std::vector<double>& values, double p);

}  // namespace critnoise
