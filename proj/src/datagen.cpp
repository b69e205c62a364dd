#include "prodridge/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace prodridge {

namespace {

constexpr double kPi = std::numbers::pi;

// Beta(a, a) via two gamma draws.
double sample_symmetric_beta(double a, Rng& rng) {
  std::gamma_distribution<double> g(a, 1.0);
  const double u = g(rng), v = g(rng);
  return u / (u + v);
}

Vector circle(double angle) {
  Vector v(2);
  v << std::cos(angle), std::sin(angle);
  return v;
}

int pick(const std::vector<double>& weights, Rng& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double u = U(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return int(k);
  }
  return int(weights.size()) - 1;
}

Point concat(const Vector& a, const Vector& b) {
  Point z(a.size() + b.size());
  z << a, b;
  return z;
}

Point scalar_point(const Vector& a, double y) {
  Point z(a.size() + 1);
  z << a, y;
  return z;
}

// Points equally spaced in arc length along t -> C(t), t in [t0, t1].
template <class Curve>
std::vector<Vector> arc_length_sample(Curve curve, double t0, double t1, int count) {
  constexpr int kGrid = 20000;
  std::vector<double> ts(kGrid + 1), cum(kGrid + 1, 0.0);
  Vector prev = curve(t0);
  ts[0] = t0;
  for (int k = 1; k <= kGrid; ++k) {
    ts[std::size_t(k)] = t0 + (t1 - t0) * k / kGrid;
    Vector cur = curve(ts[std::size_t(k)]);
    cum[std::size_t(k)] = cum[std::size_t(k - 1)] + (cur - prev).norm();
    prev = std::move(cur);
  }
  std::vector<Vector> out;
  out.reserve(std::size_t(count));
  for (int m = 0; m < count; ++m) {
    const double s = cum.back() * (m + 0.5) / count;
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    const auto k = std::size_t(std::max<std::ptrdiff_t>(1, it - cum.begin()));
    const double frac = (s - cum[k - 1]) / (cum[k] - cum[k - 1]);
    out.push_back(curve(ts[k - 1] + frac * (ts[k] - ts[k - 1])));
  }
  return out;
}

}  // namespace

Vector sphere_from_angles(double xi, double phi) {
  Vector x(3);
  x << std::cos(phi) * std::cos(xi), std::cos(phi) * std::sin(xi), std::sin(phi);
  return x;
}

std::pair<double, double> angles_from_sphere(const Eigen::Ref<const Vector>& x) {
  return {std::atan2(x[1], x[0]), std::asin(std::clamp(x[2], -1.0, 1.0))};
}

Vector sample_vmf_one(const Vector& mu, double kappa, Rng& rng) {
  const int p = int(mu.size());
  const double m1 = p - 1.0;
  double w;
  if (kappa <= 0.0) {
    w = 1.0 - 2.0 * sample_symmetric_beta(0.5 * m1, rng);
  } else {
    const double b = m1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m1 * m1));
    const double x0 = (1.0 - b) / (1.0 + b);
    const double c = kappa * x0 + m1 * std::log(1.0 - x0 * x0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    while (true) {
      const double z = sample_symmetric_beta(0.5 * m1, rng);
      w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
      const double u = U(rng);
      if (kappa * w + m1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
    }
  }
  // uniform unit direction orthogonal to mu
  std::normal_distribution<double> N(0.0, 1.0);
  Vector v(p);
  double len = 0.0;
  do {
    for (int k = 0; k < p; ++k) v[k] = N(rng);
    v -= mu.dot(v) * mu;
    len = v.norm();
  } while (len < 1e-12);
  Vector x = w * mu + std::sqrt(std::max(0.0, 1.0 - w * w)) * (v / len);
  return x / x.norm();
}

Matrix sample_vmf(int q, const Vector& mu, double kappa, int n, std::uint64_t seed) {
  if (mu.size() != q + 1) fail(ErrorCode::DimensionMismatch, "mean direction must have q+1 entries");
  if (std::abs(mu.norm() - 1.0) > 1e-12) fail(ErrorCode::InvalidArgument, "mean direction must be unit");
  if (!(kappa >= 0.0)) fail(ErrorCode::InvalidArgument, "kappa must be >= 0");
  Rng rng(seed);
  Matrix out(q + 1, n);
  for (int i = 0; i < n; ++i) out.col(i) = sample_vmf_one(mu, kappa, rng);
  return out;
}

ScenarioKind parse_scenario(const std::string& name) {
  if (name == "vmf-gauss" || name == "sim1") return ScenarioKind::VmfGaussMixture;
  if (name == "product-vmf" || name == "sim2") return ScenarioKind::ProductVmfMixture;
  if (name == "spiral" || name == "sim3") return ScenarioKind::SpiralCurve;
  if (name == "cone") return ScenarioKind::SphericalCone;
  if (name == "cylinder") return ScenarioKind::CylinderCurve;
  if (name == "torus") return ScenarioKind::TorusCurves;
  fail(ErrorCode::InvalidArgument, "unknown scenario '" + name + "'");
}

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::VmfGaussMixture: return "vmf-gauss";
    case ScenarioKind::ProductVmfMixture: return "product-vmf";
    case ScenarioKind::SpiralCurve: return "spiral";
    case ScenarioKind::SphericalCone: return "cone";
    case ScenarioKind::CylinderCurve: return "cylinder";
    case ScenarioKind::TorusCurves: return "torus";
  }
  return "unknown";
}

ProductSpace scenario_space(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::VmfGaussMixture:
    case ScenarioKind::CylinderCurve:
      return {SpaceKind::sphere(1), SpaceKind::euclidean(1)};
    case ScenarioKind::ProductVmfMixture:
    case ScenarioKind::TorusCurves:
      return {SpaceKind::sphere(1), SpaceKind::sphere(1)};
    case ScenarioKind::SpiralCurve:
    case ScenarioKind::SphericalCone:
      return {SpaceKind::sphere(2), SpaceKind::euclidean(1)};
  }
  return {};
}

int default_size(ScenarioKind kind) { return kind == ScenarioKind::SphericalCone ? 2000 : 1000; }

double default_noise(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::SpiralCurve: return 0.2;
    case ScenarioKind::SphericalCone: return 0.1;
    case ScenarioKind::CylinderCurve:
    case ScenarioKind::TorusCurves: return 0.3;
    default: return 0.0;
  }
}

std::vector<double> product_vmf_weights() { return {2.0 / 3.0, 1.0 / 3.0}; }

GeneratedData generate(const Scenario& sc) {
  if (sc.n < 1) fail(ErrorCode::InvalidArgument, "scenario needs n >= 1");
  if (sc.truth_samples < 1) fail(ErrorCode::InvalidArgument, "truth sample size must be >= 1");
  const double sigma = sc.noise_sigma.value_or(default_noise(sc.kind));
  if (!(sigma >= 0.0)) fail(ErrorCode::InvalidArgument, "noise sigma must be >= 0");

  GeneratedData out;
  out.space = scenario_space(sc.kind);
  out.noise_sigma = sigma;
  out.data.resize(out.space.ambient_dim(), sc.n);
  Rng rng(sc.seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto noise = [&] { return sigma * N(rng); };

  switch (sc.kind) {
    case ScenarioKind::VmfGaussMixture: {
      const std::vector<double> w{0.4, 0.2, 0.4};
      const Vector mus[3] = {circle(0.0), circle(0.5 * kPi), circle(kPi)};
      const double kappas[3] = {3.0, 10.0, 3.0};
      const double means[3] = {0.0, 1.0, 2.0};
      const double sds[3] = {0.5, 1.0, 1.0};
      for (int i = 0; i < sc.n; ++i) {
        const int c = pick(w, rng);
        const Vector x = sample_vmf_one(mus[c], kappas[c], rng);
        out.data.col(i) = scalar_point(x, means[c] + sds[c] * N(rng));
        out.component.push_back(c);
      }
      for (int c = 0; c < 3; ++c) out.truth.true_modes.push_back(scalar_point(mus[c], means[c]));
      break;
    }
    case ScenarioKind::ProductVmfMixture: {
      const auto w = product_vmf_weights();
      const Vector mu1[2] = {circle(0.0), circle(0.5 * kPi)};
      const Vector mu2[2] = {circle(0.0), circle(0.75 * kPi)};
      for (int i = 0; i < sc.n; ++i) {
        const int c1 = pick(w, rng);
        const Vector x = sample_vmf_one(mu1[c1], 5.0, rng);
        const int c2 = pick(w, rng);
        const Vector y = sample_vmf_one(mu2[c2], 7.0, rng);
        out.data.col(i) = concat(x, y);
        out.component.push_back(2 * c1 + c2);
      }
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out.truth.true_modes.push_back(concat(mu1[a], mu2[b]));
      }
      break;
    }
    case ScenarioKind::SpiralCurve: {
      const double lat = kPi / 6.0;
      for (int i = 0; i < sc.n; ++i) {
        const double t = 4.0 * U(rng);
        const double xi = 5.0 * t + noise();
        const double phi = lat + noise();
        const double r = t + noise();
        out.data.col(i) = scalar_point(sphere_from_angles(xi, phi), r);
      }
      auto curve = [lat](double t) -> Vector { return t * sphere_from_angles(5.0 * t, lat); };
      out.truth.manifold_sample =
          PointSet(arc_length_sample(curve, 0.0, 4.0, sc.truth_samples), SetMetric::ambient());
      break;
    }
    case ScenarioKind::SphericalCone: {
      const double lat = kPi / 4.0;
      for (int i = 0; i < sc.n; ++i) {
        Vector x = sphere_from_angles(2.0 * kPi * U(rng), lat);
        for (int k = 0; k < 3; ++k) x[k] += noise();
        x /= x.norm();
        out.data.col(i) = scalar_point(x, 2.0 * U(rng));
      }
      // area-uniform on the cone surface: radius density proportional to R
      Rng truth_rng(sc.seed ^ 0x9e3779b97f4a7c15ULL);
      std::vector<Vector> pts;
      for (int m = 0; m < sc.truth_samples; ++m) {
        const double lon = 2.0 * kPi * U(truth_rng);
        const double r = 2.0 * std::sqrt(U(truth_rng));
        pts.push_back(r * sphere_from_angles(lon, lat));
      }
      out.truth.manifold_sample = PointSet(std::move(pts), SetMetric::ambient());
      break;
    }
    case ScenarioKind::CylinderCurve: {
      for (int i = 0; i < sc.n; ++i) {
        const double t = -kPi + 2.0 * kPi * U(rng);
        const double e1 = noise();
        const double e2 = noise();
        out.data.col(i) = scalar_point(circle(t + e1), 0.5 * t + e2);
      }
      std::vector<Vector> pts;
      for (int m = 0; m < sc.truth_samples; ++m) {
        const double t = -kPi + 2.0 * kPi * (m + 0.5) / sc.truth_samples;
        pts.push_back(scalar_point(circle(t), 0.5 * t));
      }
      out.truth.manifold_sample = PointSet(std::move(pts), SetMetric::geodesic(out.space));
      break;
    }
    case ScenarioKind::TorusCurves: {
      const double centers[2] = {0.0, 0.75 * kPi};
      for (int i = 0; i < sc.n; ++i) {
        const int c = U(rng) < 0.5 ? 0 : 1;
        const double phi = -kPi + 2.0 * kPi * U(rng);
        const double e1 = noise();
        const double e2 = noise();
        out.data.col(i) = concat(circle(centers[c] + e1), circle(phi + e2));
        out.component.push_back(c);
      }
      std::vector<Vector> pts;
      const int per = std::max(1, sc.truth_samples / 2);
      for (int c = 0; c < 2; ++c) {
        for (int m = 0; m < per; ++m) {
          pts.push_back(concat(circle(centers[c]), circle(-kPi + 2.0 * kPi * (m + 0.5) / per)));
        }
      }
      out.truth.manifold_sample = PointSet(std::move(pts), SetMetric::geodesic(out.space));
      break;
    }
  }
  return out;
}

}  // namespace prodridge
