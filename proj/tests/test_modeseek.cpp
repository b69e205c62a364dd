#include <doctest.h>

#include <algorithm>

#include "prodridge/datagen.hpp"
#include "prodridge/modeseek.hpp"
#include "prodridge/ridgefind.hpp"
#include "test_support.hpp"

using namespace prodridge;

namespace {

// Convex, decreasing, positive: k(s) = (1 + s)^-2.
KernelProfile cauchy_like() {
  return KernelProfile::custom([](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); },
                               [](double s) { return -2.0 / std::pow(1.0 + s, 3); },
                               [](double s) { return 6.0 / std::pow(1.0 + s, 4); });
}

bool non_decreasing(const std::vector<double>& trace) {
  for (std::size_t t = 1; t < trace.size(); ++t) {
    if (trace[t] < trace[t - 1] * (1.0 - 1e-12)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("quantile") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5}, 0.9) == 5.0);
  CHECK(quantile({1, 2}, 0.0) == 1.0);
  CHECK(quantile({1, 2}, 1.0) == 2.0);
  CHECK_THROWS_AS(quantile({}, 0.5), Error);
}

TEST_CASE("single data point is a one-step attractor") {
  const ProductSpace s = ProductSpace::parse("s2xr1");
  Matrix d(4, 1);
  d << 0, 0, 1, 2.5;
  const KdeModel m(s, d, {0.5, 0.5});
  std::mt19937_64 rng(1);
  for (auto v : {MeanShiftVariant::Simultaneous, MeanShiftVariant::Componentwise}) {
    const Point z = testing::random_point(s, rng);
    const Point next = mean_shift_step(m, z, v);
    CHECK((next - d.col(0)).norm() < 1e-14);
  }
}

TEST_CASE("mean shift ascends for exponential and convex custom profiles") {
  std::mt19937_64 rng(2);
  for (const auto& s : testing::all_combinations()) {
    const Matrix data = testing::random_data(s, 60, rng);
    const KdeModel exp_model(s, data, {0.5, 0.7});
    const KdeModel custom_model(s, data, {0.5, 0.7}, cauchy_like(), cauchy_like());
    for (const KdeModel* m : {&exp_model, &custom_model}) {
      for (auto v : {MeanShiftVariant::Simultaneous, MeanShiftVariant::Componentwise}) {
        MeanShiftConfig cfg;
        cfg.variant = v;
        cfg.record_trace = true;
        cfg.max_iterations = 300;
        for (int rep = 0; rep < 4; ++rep) {
          const RunReport r = run_mean_shift(*m, testing::random_point(s, rng), cfg);
          CHECK(non_decreasing(r.density_trace));
          CHECK(r.density_trace.size() == std::size_t(r.iterations + 1));
        }
      }
    }
  }
}

TEST_CASE("one Gaussian blob has exactly one mode") {
  const ProductSpace s = ProductSpace::parse("r2xr1");
  std::mt19937_64 rng(3);
  const Matrix data = testing::random_data(s, 150, rng, 1.0);
  const KdeModel m(s, data, {0.9, 0.9});
  MeanShiftConfig cfg;
  const ModeSet ms = find_modes(m, matrix_to_points(data), cfg);
  REQUIRE(ms.modes.size() == 1);
  for (int label : ms.basin_labels) CHECK((label == 0 || label == -1));
  CHECK(ms.denoised == std::size_t(std::count(ms.basin_labels.begin(), ms.basin_labels.end(), -1)));
  CHECK(ms.top_eigenvalues[0] < 0.0);

  // brute-force check: the mode is the maximum of f on a dense grid
  double best = -1.0;
  Point arg;
  for (double a = -1.0; a <= 1.0; a += 0.05) {
    for (double b = -1.0; b <= 1.0; b += 0.05) {
      for (double c = -1.0; c <= 1.0; c += 0.05) {
        Point z(3);
        z << a, b, c;
        const double f = kde_value(m, z);
        if (f > best) best = f, arg = z;
      }
    }
  }
  CHECK((ms.modes[0] - arg).norm() < 0.05);
  CHECK(ms.density_values[0] >= best);
}

TEST_CASE("find_modes reports counts and basin labels") {
  Scenario sc;
  sc.kind = ScenarioKind::ProductVmfMixture;
  sc.n = 300;
  sc.seed = 4;
  const GeneratedData g = generate(sc);
  const KdeModel m(g.space, g.data, {0.3, 0.35});
  MeanShiftConfig cfg;
  cfg.denoise_quantile = 0.1;
  const auto starts = matrix_to_points(g.data);
  const ModeSet ms = find_modes(m, starts, cfg);
  CHECK(ms.denoised == 30);
  CHECK(ms.denoised + ms.converged + ms.dropped == starts.size());
  CHECK(ms.modes.size() == ms.density_values.size());
  CHECK(ms.basin_labels.size() == starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const int l = ms.basin_labels[i];
    if (l < 0) continue;
    REQUIRE(std::size_t(l) < ms.modes.size());
    CHECK(geodesic_distance(g.space, ms.reports[i].final_point, ms.modes[std::size_t(l)]) < 0.2);
  }
  // the representative is the highest-density member of its cluster
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const int l = ms.basin_labels[i];
    if (l >= 0) CHECK(ms.reports[i].final_density <= ms.density_values[std::size_t(l)] + 1e-15);
  }
}

TEST_CASE("mode finding does not depend on the thread count") {
  Scenario sc;
  sc.kind = ScenarioKind::VmfGaussMixture;
  sc.n = 200;
  sc.seed = 5;
  const GeneratedData g = generate(sc);
  const KdeModel m(g.space, g.data, {0.45, 0.4});
  MeanShiftConfig a, b;
  a.threads = 1;
  b.threads = 5;
  const auto starts = matrix_to_points(g.data);
  const ModeSet x = find_modes(m, starts, a);
  const ModeSet y = find_modes(m, starts, b);
  REQUIRE(x.modes.size() == y.modes.size());
  for (std::size_t k = 0; k < x.modes.size(); ++k) CHECK((x.modes[k] - y.modes[k]).norm() == 0.0);
  CHECK(x.basin_labels == y.basin_labels);
}

TEST_CASE("simultaneous and componentwise updates reach the same modes") {
  Scenario sc;
  sc.kind = ScenarioKind::VmfGaussMixture;
  sc.n = 400;
  sc.seed = 6;
  const GeneratedData g = generate(sc);
  const KdeModel m(g.space, g.data, {0.45, 0.35});
  MeanShiftConfig a, b;
  b.variant = MeanShiftVariant::Componentwise;
  for (int i = 0; i < 40; ++i) {
    const Point z = g.data.col(i * 7);
    const RunReport ra = run_mean_shift(m, z, a);
    const RunReport rb = run_mean_shift(m, z, b);
    if (ra.converged && rb.converged) {
      CHECK(geodesic_distance(g.space, ra.final_point, rb.final_point) < 1e-4);
    }
  }
}

TEST_CASE("single linkage is order independent") {
  const ProductSpace s = ProductSpace::parse("s1xr1");
  std::vector<Point> pts = {testing::concat(testing::circle(0.0), Vector::Constant(1, 0.0)),
                            testing::concat(testing::circle(0.05), Vector::Constant(1, 0.0)),
                            testing::concat(testing::circle(0.1), Vector::Constant(1, 0.02)),
                            testing::concat(testing::circle(2.0), Vector::Constant(1, 1.0)),
                            testing::concat(testing::circle(2.0), Vector::Constant(1, 1.5))};
  const auto labels = single_linkage(s, pts, 0.06);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[1] == labels[2]);  // chained through the middle point
  CHECK(labels[3] != labels[0]);
  CHECK(labels[4] != labels[3]);

  std::vector<Point> rev(pts.rbegin(), pts.rend());
  const auto rl = single_linkage(s, rev, 0.06);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(rl[pts.size() - 1 - i] == labels[i]);
}

TEST_CASE("find_modes argument errors") {
  const ProductSpace s = ProductSpace::parse("s1xr1");
  Matrix d(3, 2);
  d << 1, 0, 0, 1, 0, 0;
  const KdeModel m(s, d, {0.5, 0.5});
  MeanShiftConfig cfg;
  CHECK_THROWS_AS(find_modes(m, {}, cfg), Error);
  cfg.denoise_quantile = 1.5;
  CHECK_THROWS_AS(find_modes(m, {d.col(0)}, cfg), Error);
  cfg.denoise_quantile = 0.0;
  cfg.max_iterations = 1;
  cfg.tolerance = 1e-300;
  // nothing converges in one step from far away
  Point far(3);
  far << 0, 1, 3;
  try {
    find_modes(m, {far}, cfg);
    FAIL("expected EmptyResult");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyResult);
  }
}
