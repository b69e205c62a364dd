#pragma once

#include <vector>

#include "prodridge/geometry.hpp"

namespace prodridge {

/// How distances between members of a PointSet are measured.
struct SetMetric {
  enum class Kind { Geodesic, AmbientEuclidean };
  Kind kind = Kind::AmbientEuclidean;
  ProductSpace space;  // used only for Geodesic

  static SetMetric geodesic(ProductSpace s) { return {Kind::Geodesic, s}; }
  static SetMetric ambient() { return {Kind::AmbientEuclidean, {}}; }

  double operator()(const Vector& a, const Vector& b) const;
  friend bool operator==(const SetMetric&, const SetMetric&) = default;
};

/// A nonempty finite point set with its metric.
struct PointSet {
  std::vector<Vector> points;
  SetMetric metric;

  PointSet(std::vector<Vector> pts, SetMetric m);
  std::size_t size() const { return points.size(); }
};

/// min over b in B of d(a, b).
double distance_to_set(const Vector& a, const PointSet& B);

/// max(sup_a d(a, B), sup_b d(b, A)), exact by pairwise distances.
/// Throws MetricMismatch when the sets use different metrics.
double hausdorff_distance(const PointSet& A, const PointSet& B, int threads = 0);

/// 1/2 [mean_{z in estimate} d(z, truth) + mean_{z in truth} d(z, estimate)],
/// where `truth` is a dense uniform sample of the true manifold.
double manifold_recovering_error(const PointSet& estimate, const PointSet& truth, int threads = 0);

/// (X, R) on Omega_2 x R mapped to R * X in R^3.
Vector to_cartesian(const Point& z);
std::vector<Vector> to_cartesian(const std::vector<Point>& pts);

}  // namespace prodridge
