#include "critnoise/observables.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "critnoise/cycles.hpp"
#include "critnoise/distances.hpp"

namespace critnoise {

Observable Observable::size_threshold(std::uint32_t rank, double a) {
  if (rank == 0) throw std::invalid_argument("rank is 1-based");
  Observable f;
  f.kind = ObservableKind::size_threshold;
  f.rank = rank;
  f.a = a;
  return f;
}

Observable Observable::diameter_threshold(std::uint32_t rank, double a) {
  if (rank == 0) throw std::invalid_argument("rank is 1-based");
  Observable f;
  f.kind = ObservableKind::diameter_threshold;
  f.rank = rank;
  f.a = a;
  return f;
}

Observable Observable::cycle_in_range(double a, double b) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("need 0 < a < b");
  Observable f;
  f.kind = ObservableKind::cycle_in_range;
  f.a = a;
  f.b = b;
  return f;
}

Observable Observable::l2_ball(SizeVector reference, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be >= 0");
  Observable f;
  f.kind = ObservableKind::l2_ball;
  f.reference = std::move(reference);
  f.radius = radius;
  return f;
}

bool evaluate_from_sizes(const Observable& f,
                         const std::vector<std::uint32_t>& sizes, Vertex n) {
  switch (f.kind) {
    case ObservableKind::size_threshold: {
      const double cr = std::cbrt(static_cast<double>(n));
      const double thr = f.a * cr * cr;
      const double sz =
          f.rank <= sizes.size() ? static_cast<double>(sizes[f.rank - 1]) : 0.0;
      return sz >= thr;
    }
    case ObservableKind::l2_ball:
      return l2_distance(size_vector(sizes, n), f.reference) <= f.radius;
    default:
      throw std::invalid_argument("observable needs the full graph");
  }
}

bool evaluate(const Observable& f, const Graph& g) {
  switch (f.kind) {
    case ObservableKind::size_threshold: {
      const double cr = std::cbrt(static_cast<double>(g.n));
      const double thr = f.a * cr * cr;
      if (f.rank == 1)
        return static_cast<double>(largest_component_size(g)) >= thr;
      return evaluate_from_sizes(f, component_sizes(g), g.n);
    }
    case ObservableKind::diameter_threshold: {
      const ComponentDecomposition d = components(g);
      if (f.rank > d.count()) return false;
      const double thr = f.a * std::cbrt(static_cast<double>(g.n));
      return static_cast<double>(component_diameter(g, d, f.rank - 1)) >= thr;
    }
    case ObservableKind::cycle_in_range: {
      const double cr = std::cbrt(static_cast<double>(g.n));
      return has_cycle_in_range(g, f.a * cr, f.b * cr);
    }
    case ObservableKind::l2_ball:
      return evaluate_from_sizes(f, component_sizes(g), g.n);
  }
  throw std::logic_error("unknown observable kind");
}

std::string observable_name(const Observable& f) {
  std::ostringstream os;
  switch (f.kind) {
    case ObservableKind::size_threshold:
      os << "size_threshold(" << f.rank << "," << f.a << ")";
      break;
    case ObservableKind::diameter_threshold:
      os << "diameter_threshold(" << f.rank << "," << f.a << ")";
      break;
    case ObservableKind::cycle_in_range:
      os << "cycle_in_range(" << f.a << "," << f.b << ")";
      break;
    case ObservableKind::l2_ball:
      os << "l2_ball(" << f.reference.entries.size() << "pts," << f.radius
         << ")";
      break;
  }
  return os.str();
}

}  // namespace critnoise
