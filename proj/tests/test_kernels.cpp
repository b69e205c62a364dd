#include <doctest.h>

#include <cmath>
#include <numbers>

#include "prodridge/kernels.hpp"
#include "test_support.hpp"

using namespace prodridge;

TEST_CASE("bessel_i against the standard library") {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 3.5, 7.0}) {
    for (double x : {1e-6, 0.01, 0.3, 1.0, 4.9, 10.0, 29.0, 31.0, 60.0, 150.0, 600.0}) {
      const double ref = std::cyl_bessel_i(nu, x);
      if (ref == 0.0 || !std::isfinite(ref)) continue;
      CHECK(bessel_i(nu, x) == doctest::Approx(ref).epsilon(1e-11));
      CHECK(log_bessel_i(nu, x) == doctest::Approx(std::log(ref)).epsilon(1e-12));
    }
  }
}

TEST_CASE("bessel_i recurrence") {
  for (double nu : {1.0, 1.5, 2.0, 4.5}) {
    for (double x = 0.25; x < 80.0; x *= 1.7) {
      const double lhs = bessel_i(nu - 1.0, x) - bessel_i(nu + 1.0, x);
      const double rhs = 2.0 * nu / x * bessel_i(nu, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("half-order closed form holds far past overflow") {
  // I_{1/2}(x) = sqrt(2 / (pi x)) sinh x
  for (double x : {0.5, 5.0, 50.0, 700.0, 5000.0, 1e5}) {
    const double log_sinh = x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
    const double ref = 0.5 * std::log(2.0 / (std::numbers::pi * x)) + log_sinh;
    CHECK(log_bessel_i(0.5, x) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bessel_i(0.0, 1e4), Error);
  CHECK(log_bessel_i(0.0, 0.0) == 0.0);
  CHECK(std::isinf(log_bessel_i(1.0, 0.0)));
  CHECK_THROWS_AS(log_bessel_i(-1.0, 1.0), Error);
}

TEST_CASE("vMF normalizer closed forms") {
  for (double k : {0.1, 1.0, 3.0, 10.0, 100.0}) {
    CHECK(vmf_normalizer(1, k) ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi * std::cyl_bessel_i(0.0, k))).epsilon(1e-11));
    CHECK(vmf_normalizer(2, k) ==
          doctest::Approx(k / (4.0 * std::numbers::pi * std::sinh(k))).epsilon(1e-11));
  }
  CHECK(vmf_normalizer(1, 0.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(vmf_normalizer(2, 0.0) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
  // kappa = 1/h^2 for h = 0.01 is far beyond exp overflow but the log is fine
  CHECK(std::isfinite(log_vmf_normalizer(2, 1e4)));
}

TEST_CASE("vMF density integrates to one on the circle") {
  for (double k : {0.5, 4.0, 25.0}) {
    const int m = 20000;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / m;
      sum += std::exp(k * std::cos(t));
    }
    sum *= vmf_normalizer(1, k) * 2.0 * std::numbers::pi / m;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("vMF density integrates to one on the sphere") {
  // integral over Omega_2 reduces to 2 pi int_{-1}^{1} e^{k t} dt
  for (double k : {0.5, 4.0, 25.0}) {
    const int m = 400000;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += std::exp(k * (-1.0 + 2.0 * (i + 0.5) / m));
    sum *= vmf_normalizer(2, k) * 2.0 * std::numbers::pi * 2.0 / m;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("product normalizing constant") {
  const ProductSpace s = ProductSpace::parse("s1xr1");
  const double h1 = 0.4, h2 = 0.7;
  const double k = 1.0 / (h1 * h1);
  const double expect = std::log(vmf_normalizer(1, k)) + k - 0.5 * std::log(2.0 * std::numbers::pi) -
                        std::log(h2);
  CHECK(log_kde_normalizing_constant(s, {h1, h2}) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(kde_normalizing_constant(s, {h1, h2}) == doctest::Approx(std::exp(expect)).epsilon(1e-12));
  // the e^kappa factor keeps tiny circular bandwidths representable
  CHECK(std::isfinite(kde_normalizing_constant(s, {0.02, 1.0})));
  CHECK(std::isfinite(log_kde_normalizing_constant(s, {1e-150, 1.0})));

  const Vector d = bandwidth_diagonal(ProductSpace::parse("s2xr1"), {0.5, 2.0});
  CHECK(d.size() == 4);
  CHECK(d[0] == 0.25);
  CHECK(d[2] == 0.25);
  CHECK(d[3] == 4.0);
}

TEST_CASE("bandwidth validation") {
  CHECK_THROWS_AS(Bandwidths(0.0, 1.0), Error);
  CHECK_THROWS_AS(Bandwidths(1.0, -1.0), Error);
  CHECK_THROWS_AS(Bandwidths(1.0, std::numeric_limits<double>::infinity()), Error);
  CHECK_NOTHROW(Bandwidths(1e-3, 1e3));
}

TEST_CASE("kernel profiles") {
  const KernelProfile g = KernelProfile::gaussian();
  CHECK(g.value(0.5) == doctest::Approx(std::exp(-0.5)));
  CHECK(g.derivative(0.5) == doctest::Approx(-std::exp(-0.5)));
  CHECK(g.second_derivative(0.5) == doctest::Approx(std::exp(-0.5)));
  const KernelProfile c = KernelProfile::custom([](double s) { return 1.0 / (1.0 + s); },
                                                [](double s) { return -1.0 / ((1.0 + s) * (1.0 + s)); },
                                                [](double s) { return 2.0 / std::pow(1.0 + s, 3); });
  CHECK_FALSE(c.exponential());
  CHECK(c.value(1.0) == 0.5);
  CHECK_THROWS_AS(KernelProfile::custom({}, {}, {}), Error);
  CHECK(KernelProfile::for_factor(SpaceKind::sphere(1)).kind == KernelProfile::Kind::VonMises);
  CHECK(KernelProfile::for_factor(SpaceKind::euclidean(1)).kind == KernelProfile::Kind::Gaussian);
}
