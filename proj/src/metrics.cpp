#include "prodridge/metrics.hpp"

#include <algorithm>
#include <limits>

#include "prodridge/parallel.hpp"

namespace prodridge {

double SetMetric::operator()(const Vector& a, const Vector& b) const {
  if (kind == Kind::Geodesic) return geodesic_distance(space, a, b);
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "points differ in dimension");
  return (a - b).norm();
}

PointSet::PointSet(std::vector<Vector> pts, SetMetric m) : points(std::move(pts)), metric(m) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "point set must be nonempty");
}

double distance_to_set(const Vector& a, const PointSet& B) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : B.points) best = std::min(best, B.metric(a, b));
  return best;
}

namespace {

Vector nearest_distances(const PointSet& from, const PointSet& to, int threads) {
  Vector d(Eigen::Index(from.size()));
  parallel_for(from.size(), threads,
               [&](std::size_t i) { d[Eigen::Index(i)] = distance_to_set(from.points[i], to); });
  return d;
}

void require_same_metric(const PointSet& A, const PointSet& B) {
  if (!(A.metric == B.metric)) fail(ErrorCode::MetricMismatch, "point sets use different metrics");
}

}  // namespace

double hausdorff_distance(const PointSet& A, const PointSet& B, int threads) {
  require_same_metric(A, B);
  return std::max(nearest_distances(A, B, threads).maxCoeff(),
                  nearest_distances(B, A, threads).maxCoeff());
}

double manifold_recovering_error(const PointSet& estimate, const PointSet& truth, int threads) {
  require_same_metric(estimate, truth);
  return 0.5 * (nearest_distances(estimate, truth, threads).mean() +
                nearest_distances(truth, estimate, threads).mean());
}

Vector to_cartesian(const Point& z) {
  if (z.size() != 4) fail(ErrorCode::DimensionMismatch, "Cartesian map expects Omega_2 x R points");
  return z[3] * z.head(3);
}

std::vector<Vector> to_cartesian(const std::vector<Point>& pts) {
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(to_cartesian(p));
  return out;
}

}  // namespace prodridge
