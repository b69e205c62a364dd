#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "prodridge/geometry.hpp"
#include "prodridge/metrics.hpp"

namespace prodridge {

using Rng = std::mt19937_64;

/// n i.i.d. draws from vMF(mu, kappa) on Omega_q (mu has q+1 entries), one
/// per column. Wood's tangent-normal rejection sampler.
Matrix sample_vmf(int q, const Vector& mu, double kappa, int n, std::uint64_t seed);

/// Single draw using an existing generator.
Vector sample_vmf_one(const Vector& mu, double kappa, Rng& rng);

enum class ScenarioKind {
  VmfGaussMixture,    // Omega_1 x R, three vMF-Gaussian components
  ProductVmfMixture,  // Omega_1 x Omega_1, product of two vMF mixtures
  SpiralCurve,        // Omega_2 x R, noisy spiral, truth in Cartesian R^3
  SphericalCone,      // Omega_2 x R, noisy cone at latitude 45 deg, truth in R^3
  CylinderCurve,      // Omega_1 x R, noisy helix (cos t, sin t, t / 2)
  TorusCurves,        // Omega_1 x Omega_1, two toroidal circles
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::VmfGaussMixture;
  int n = 1000;
  /// nullopt uses the scenario's published noise level.
  std::optional<double> noise_sigma;
  std::uint64_t seed = 0;
  /// Points in the dense uniform sample of the true manifold.
  int truth_samples = 2000;
};

struct GroundTruth {
  std::vector<Point> true_modes;
  std::optional<PointSet> manifold_sample;
};

struct GeneratedData {
  ProductSpace space;
  Matrix data;  // ambient_dim x n
  GroundTruth truth;
  std::vector<int> component;  // mixture component per point, empty otherwise
  double noise_sigma = 0.0;
};

ScenarioKind parse_scenario(const std::string& name);
std::string scenario_name(ScenarioKind kind);
ProductSpace scenario_space(ScenarioKind kind);
double default_noise(ScenarioKind kind);
/// Published sample size: 2000 for the spherical cone, 1000 otherwise.
int default_size(ScenarioKind kind);

/// Deterministic under a fixed Scenario (including the seed).
GeneratedData generate(const Scenario& scenario);

/// (longitude xi, latitude phi) in radians -> (cos phi cos xi, cos phi sin xi, sin phi).
Vector sphere_from_angles(double xi, double phi);
/// Inverse of sphere_from_angles.
std::pair<double, double> angles_from_sphere(const Eigen::Ref<const Vector>& x);

/// Mixture weights of the product-vMF scenario, renormalized per factor.
std::vector<double> product_vmf_weights();

}  // namespace prodridge
