#pragma once

#include <optional>
#include <vector>

#include "prodridge/density.hpp"
#include "prodridge/modeseek.hpp"

namespace prodridge {

enum class ScmsVariant {
  Proposed,      // z + eta V V^T H^{-1} Xi(z)
  NaivePitfall,  // z + V V^T Xi(z); converges to a distorted ridge when h1 != h2
};

struct ScmsConfig {
  int ridge_dim = 1;
  /// nullopt = automatic step min(h1 h2, 1), resolved once per run.
  std::optional<double> step_size;
  double tolerance = 1e-7;
  int max_iterations = 5000;
  bool use_log_density = true;
  ScmsVariant variant = ScmsVariant::Proposed;
  /// Starts below this density quantile (over the data) are not iterated.
  double denoise_quantile = 0.0;
  int threads = 0;
};

/// Eigenpairs of a Riemannian Hessian restricted to T_z.
struct TangentSpectrum {
  Vector eigenvalues;    // D_T values, descending
  Matrix eigenvectors;   // ambient_dim x D_T, columns match eigenvalues
  Matrix tail;           // last D_T - d columns: V_d
  bool eigengap_warning = false;  // lambda_d - lambda_{d+1} < 1e-10
};

/// Full symmetric eigendecomposition of the ambient matrix with the radial
/// eigenvectors (one per directional factor) removed. `hessian` must
/// annihilate the radial directions of z.
TangentSpectrum tangent_eigendecomposition(const Matrix& hessian, const ProductSpace& space,
                                           const Point& z, int d);

/// min(h1 * h2, 1).
double default_step_size(const Bandwidths& h);

/// One SCMS update with an already-resolved step size.
Point scms_step(const KdeModel& model, const Point& z, const ScmsConfig& config, double eta);

struct RidgeResult {
  std::vector<Point> points;        // converged endpoints, in start order
  std::vector<std::size_t> source;  // start index of each point
  std::vector<RunReport> reports;   // one per start
  double step_size = 0.0;
  std::size_t denoised = 0;
  std::size_t converged = 0;
  std::size_t dropped = 0;
  std::size_t eigengap_warnings = 0;
};

RunReport run_scms(const KdeModel& model, const Point& start, const ScmsConfig& config, double eta,
                   std::size_t* eigengap_warnings = nullptr);

/// Denoises, iterates the remaining starts, keeps the converged ones. Throws EmptyResult when
/// none converge.
RidgeResult find_ridge(const KdeModel& model, const std::vector<Point>& starts,
                       const ScmsConfig& config);

}  // namespace prodridge
