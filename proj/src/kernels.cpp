#include "prodridge/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace prodridge {

namespace {

constexpr double kSeriesSwitch = 30.0;
constexpr double kRescale = 1e250;
const double kLogRescale = std::log(kRescale);

// log of sum_k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)); terms are kept relative to
// the leading term and rescaled whenever they grow past 1e250.
double log_bessel_series(double nu, double x) {
  const double quarter_sq = 0.25 * x * x;
  double term = 1.0, sum = 1.0, log_scale = 0.0;
  for (int k = 0; k < 100000; ++k) {
    term *= quarter_sq / ((k + 1.0) * (k + nu + 1.0));
    sum += term;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      log_scale += kLogRescale;
    }
    if (term < 1e-17 * sum && k + 1.0 > 0.5 * x) break;
  }
  return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + log_scale + std::log(sum);
}

// Hankel expansion I_nu(x) ~ e^x / sqrt(2 pi x) sum_k (-1)^k a_k(nu) / x^k.
double log_bessel_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) > std::abs(term)) break;  // series started diverging
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

double log_sphere_area(int q) {
  const double a = 0.5 * (q + 1.0);
  return std::log(2.0) + a * std::log(std::numbers::pi) - std::lgamma(a);
}

}  // namespace

double log_bessel_i(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0) || std::isinf(nu)) {
    fail(ErrorCode::InvalidArgument, "bessel_i needs order >= 0 and argument >= 0");
  }
  if (std::isinf(x)) return std::numeric_limits<double>::infinity();
  if (x == 0.0) return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (x <= kSeriesSwitch || nu * nu > x) return log_bessel_series(nu, x);
  return log_bessel_asymptotic(nu, x);
}

double bessel_i(double nu, double x) {
  const double lg = log_bessel_i(nu, x);
  if (lg > std::log(std::numeric_limits<double>::max())) {
    fail(ErrorCode::Overflow, "I_nu(x) overflows double precision at x = " + std::to_string(x));
  }
  return std::exp(lg);
}

double log_vmf_normalizer(int q, double kappa) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "vmf_normalizer needs q >= 1");
  if (!(kappa >= 0.0)) fail(ErrorCode::InvalidArgument, "vmf_normalizer needs kappa >= 0");
  if (kappa < 1e-280) return -log_sphere_area(q);
  const double nu = 0.5 * (q - 1.0);
  return nu * std::log(kappa) - 0.5 * (q + 1.0) * std::log(2.0 * std::numbers::pi) -
         log_bessel_i(nu, kappa);
}

double vmf_normalizer(int q, double kappa) { return std::exp(log_vmf_normalizer(q, kappa)); }

Bandwidths::Bandwidths(double a, double b) : h1(a), h2(b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorCode::InvalidArgument, "bandwidths must be positive and finite");
  }
}

KernelProfile KernelProfile::custom(std::function<double(double)> k,
                                    std::function<double(double)> dk,
                                    std::function<double(double)> d2k) {
  if (!k || !dk || !d2k) fail(ErrorCode::InvalidArgument, "custom profile needs k, k', k''");
  return {Kind::Custom, std::move(k), std::move(dk), std::move(d2k)};
}

KernelProfile KernelProfile::for_factor(const SpaceKind& kind) {
  return kind.directional() ? von_mises() : gaussian();
}

double KernelProfile::value(double s) const { return exponential() ? std::exp(-s) : k(s); }
double KernelProfile::derivative(double s) const { return exponential() ? -std::exp(-s) : dk(s); }
double KernelProfile::second_derivative(double s) const {
  return exponential() ? std::exp(-s) : d2k(s);
}

double log_factor_normalizer(const SpaceKind& kind, const KernelProfile& profile, double h) {
  if (!profile.exponential()) return 0.0;
  if (!kind.directional()) {
    return -0.5 * kind.dim * std::log(2.0 * std::numbers::pi) - kind.dim * std::log(h);
  }
  const double kappa = 1.0 / (h * h);
  return log_vmf_normalizer(kind.dim, kappa) + kappa;
}

double log_kde_normalizing_constant(const ProductSpace& space, const Bandwidths& h) {
  return log_factor_normalizer(space.first, KernelProfile::for_factor(space.first), h.h1) +
         log_factor_normalizer(space.second, KernelProfile::for_factor(space.second), h.h2);
}

double kde_normalizing_constant(const ProductSpace& space, const Bandwidths& h) {
  const double lc = log_kde_normalizing_constant(space, h);
  if (lc > std::log(std::numeric_limits<double>::max())) {
    fail(ErrorCode::Overflow, "normalizing constant overflows for bandwidths this small");
  }
  return std::exp(lc);
}

Vector bandwidth_diagonal(const ProductSpace& space, const Bandwidths& h) {
  Vector d(space.ambient_dim());
  d.segment(0, space.block_size(0)).setConstant(h.h1 * h.h1);
  d.segment(space.offset(1), space.block_size(1)).setConstant(h.h2 * h.h2);
  return d;
}

}  // namespace prodridge
