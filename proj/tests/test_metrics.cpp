#include <doctest.h>

#include "prodridge/metrics.hpp"
#include "test_support.hpp"

using namespace prodridge;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

TEST_CASE("Hausdorff distance on small sets") {
  const PointSet A({v2(0, 0), v2(1, 0)}, SetMetric::ambient());
  const PointSet B({v2(0, 0), v2(1, 0), v2(4, 0)}, SetMetric::ambient());
  CHECK(hausdorff_distance(A, B) == 3.0);
  CHECK(hausdorff_distance(B, A) == 3.0);
  CHECK(hausdorff_distance(A, A) == 0.0);
  CHECK(distance_to_set(v2(0.5, 2), A) == doctest::Approx(std::sqrt(4.25)));
}

TEST_CASE("manifold-recovering error") {
  const PointSet est({v2(0, 1)}, SetMetric::ambient());
  const PointSet truth({v2(0, 0), v2(2, 0)}, SetMetric::ambient());
  // est->truth: 1; truth->est: (1 + sqrt 5) / 2
  CHECK(manifold_recovering_error(est, truth) == doctest::Approx(0.5 * (1 + 0.5 * (1 + std::sqrt(5.0)))));
  CHECK(manifold_recovering_error(truth, truth) == 0.0);
}

TEST_CASE("metric properties on random sets") {
  std::mt19937_64 rng(1);
  const ProductSpace s = ProductSpace::parse("s1xs1");
  auto random_set = [&](int n) {
    std::vector<Vector> pts;
    for (int i = 0; i < n; ++i) pts.push_back(testing::random_point(s, rng));
    return PointSet(pts, SetMetric::geodesic(s));
  };
  for (int rep = 0; rep < 10; ++rep) {
    const PointSet A = random_set(30), B = random_set(20), C = random_set(25);
    const double ab = hausdorff_distance(A, B);
    CHECK(ab == hausdorff_distance(B, A));
    CHECK(ab <= hausdorff_distance(A, C) + hausdorff_distance(C, B) + 1e-12);
    CHECK(manifold_recovering_error(A, B) <= ab);
    CHECK(manifold_recovering_error(A, B) == doctest::Approx(manifold_recovering_error(B, A)));
    CHECK(hausdorff_distance(A, B, 1) == hausdorff_distance(A, B, 4));
  }
}

TEST_CASE("metric mismatch and empty sets") {
  const ProductSpace s = ProductSpace::parse("s1xr1");
  const PointSet A({(Vector(3) << 1, 0, 0).finished()}, SetMetric::geodesic(s));
  const PointSet B({(Vector(3) << 1, 0, 0).finished()}, SetMetric::ambient());
  try {
    hausdorff_distance(A, B);
    FAIL("expected MetricMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MetricMismatch);
  }
  CHECK_THROWS_AS(manifold_recovering_error(A, B), Error);
  CHECK_THROWS_AS(PointSet({}, SetMetric::ambient()), Error);
}

TEST_CASE("Cartesian conversion") {
  Point z(4);
  z << 0, 0.6, 0.8, 2.5;
  const Vector c = to_cartesian(z);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == doctest::Approx(1.5));
  CHECK(c[2] == doctest::Approx(2.0));
  CHECK_THROWS_AS(to_cartesian(Point(Point::Zero(3))), Error);
}
