#pragma once

#include <functional>

#include "prodridge/geometry.hpp"

namespace prodridge {

/// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
/// Throws Overflow when the result is not representable; use
/// log_bessel_i for large arguments.
double bessel_i(double nu, double x);

/// log I_nu(x). Power series (rescaled to stay finite) for x <= 30 or when
/// nu^2 > x; large-argument asymptotic series otherwise. Returns -inf for
/// x = 0 and nu > 0.
double log_bessel_i(double nu, double x);

/// vMF normalizing constant C_q(kappa) on Omega_q; kappa = 0 gives the
/// reciprocal surface area of the sphere.
double vmf_normalizer(int q, double kappa);
double log_vmf_normalizer(int q, double kappa);

/// Per-factor smoothing parameters (h1 for the first factor, h2 for the second).
struct Bandwidths {
  double h1 = 1.0;
  double h2 = 1.0;

  Bandwidths() = default;
  Bandwidths(double a, double b);

  double operator[](int j) const { return j == 0 ? h1 : h2; }
};

/// Radial kernel profile k. Kernels are evaluated as k(||u||^2 / 2) with
/// u = (x - X_i) / h, so the exponential profile k(s) = exp(-s) yields the
/// Gaussian kernel on R^D and the von Mises kernel exp((x.X_i - 1) / h^2)
/// on the sphere.
struct KernelProfile {
  enum class Kind { Gaussian, VonMises, Custom };

  Kind kind = Kind::Gaussian;
  // Custom profiles only. Must be positive where used and decreasing.
  std::function<double(double)> k;
  std::function<double(double)> dk;
  std::function<double(double)> d2k;

  static KernelProfile gaussian() { return {Kind::Gaussian, {}, {}, {}}; }
  static KernelProfile von_mises() { return {Kind::VonMises, {}, {}, {}}; }
  static KernelProfile custom(std::function<double(double)> k, std::function<double(double)> dk,
                              std::function<double(double)> d2k);

  /// The natural exponential kernel for a factor: von Mises on spheres,
  /// Gaussian on Euclidean factors.
  static KernelProfile for_factor(const SpaceKind& kind);

  bool exponential() const { return kind != Kind::Custom; }
  double value(double s) const;
  double derivative(double s) const;
  double second_derivative(double s) const;
};

/// log C_{k,D}(h) for one factor. Exact for the Gaussian and von Mises
/// kernels; custom profiles are left unnormalized (returns 0).
double log_factor_normalizer(const SpaceKind& kind, const KernelProfile& profile, double h);

/// log C(h) = sum over factors of log_factor_normalizer, for the exponential
/// kernels attached to each factor.
double log_kde_normalizing_constant(const ProductSpace& space, const Bandwidths& h);

/// C(h) itself. Throws Overflow when exp(1/h^2) style factors make it
/// unrepresentable.
double kde_normalizing_constant(const ProductSpace& space, const Bandwidths& h);

/// Diagonal of H = Diag(h1^2 I, h2^2 I) in ambient coordinates.
Vector bandwidth_diagonal(const ProductSpace& space, const Bandwidths& h);

}  // namespace prodridge
