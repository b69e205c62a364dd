#include "prodridge/ridgefind.hpp"

#include <algorithm>
#include <cmath>

#include "prodridge/parallel.hpp"

namespace prodridge {

namespace {

constexpr double kRadialTol = 1e-8;
constexpr double kRadialOverlap = 0.5;
constexpr double kEigengap = 1e-10;

}  // namespace

TangentSpectrum tangent_eigendecomposition(const Matrix& hessian, const ProductSpace& space,
                                           const Point& z, int d) {
  check_dimension(space, z);
  const int p = space.ambient_dim();
  const int dt = space.intrinsic_dim();
  if (hessian.rows() != p || hessian.cols() != p) {
    fail(ErrorCode::DimensionMismatch, "Hessian size does not match the ambient dimension");
  }
  if (d < 0 || d >= dt) fail(ErrorCode::InvalidArgument, "ridge dimension must satisfy 0 <= d < D_T");

  const Matrix R = radial_directions(space, z);
  const double scale = std::max(1.0, hessian.cwiseAbs().maxCoeff());
  if (R.cols() > 0 && (hessian * R).cwiseAbs().maxCoeff() > kRadialTol * scale) {
    fail(ErrorCode::RadialLeakage, "Hessian does not annihilate the radial directions");
  }

  // Push the radial eigenvalues far below the spectrum so they never share an
  // eigenspace with a tangent eigenvalue that happens to be zero.
  const double shift = 1.0 + 2.0 * hessian.norm();
  const Matrix shifted = hessian - shift * (R * R.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (shifted + shifted.transpose()));
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::InvalidArgument, "symmetric eigendecomposition failed");
  }

  std::vector<int> kept;
  int removed = 0;
  for (int k = 0; k < p; ++k) {
    const Vector v = solver.eigenvectors().col(k);
    const double overlap = R.cols() > 0 ? (R.transpose() * v).squaredNorm() : 0.0;
    if (overlap > kRadialOverlap) {
      const double lambda = v.dot(hessian * v);
      if (std::abs(lambda) > kRadialTol * scale) {
        fail(ErrorCode::RadialLeakage, "radial eigenvector has a nonzero eigenvalue");
      }
      ++removed;
    } else {
      kept.push_back(k);
    }
  }
  if (removed != space.directional_count() || int(kept.size()) != dt) {
    fail(ErrorCode::RadialLeakage, "expected " + std::to_string(space.directional_count()) +
                                       " radial eigenvectors, found " + std::to_string(removed));
  }

  // Eigen returns ascending order; reverse for descending
  std::reverse(kept.begin(), kept.end());
  TangentSpectrum out;
  out.eigenvalues.resize(dt);
  out.eigenvectors.resize(p, dt);
  for (int k = 0; k < dt; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()[kept[std::size_t(k)]];
    out.eigenvectors.col(k) = solver.eigenvectors().col(kept[std::size_t(k)]);
  }
  out.tail = out.eigenvectors.rightCols(dt - d);
  if (d > 0 && out.eigenvalues[d - 1] - out.eigenvalues[d] < kEigengap) {
    out.eigengap_warning = true;
  }
  return out;
}

double default_step_size(const Bandwidths& h) { return std::min(h.h1 * h.h2, 1.0); }

namespace {

Point scms_step_impl(const KdeModel& model, const Point& z, const ScmsConfig& config, double eta,
                     bool* gap_warning) {
  const DensityJet jet =
      config.use_log_density ? log_density_jet(model, z) : density_jet(model, z);
  const TangentSpectrum spec =
      tangent_eigendecomposition(jet.riem_hessian, model.space(), z, config.ridge_dim);
  if (gap_warning) *gap_warning = spec.eigengap_warning;
  const Matrix& V = spec.tail;

  Vector direction;
  if (config.variant == ScmsVariant::NaivePitfall) {
    direction = mean_shift_vector(model, z);
    eta = 1.0;
  } else if (config.use_log_density && model.exponential()) {
    // grad log f = H^{-1} Xi for the exponential kernels
    direction = jet.total_gradient;
  } else {
    direction = model.inverse_bandwidth_diag().cwiseProduct(mean_shift_vector(model, z));
  }

  Point next = z + eta * (V * (V.transpose() * direction));
  normalize_directional(model.space(), next);
  return next;
}

}  // namespace

Point scms_step(const KdeModel& model, const Point& z, const ScmsConfig& config, double eta) {
  if (!(eta > 0.0)) fail(ErrorCode::InvalidArgument, "SCMS step size must be positive");
  return scms_step_impl(model, z, config, eta, nullptr);
}

RunReport run_scms(const KdeModel& model, const Point& start, const ScmsConfig& config, double eta,
                   std::size_t* eigengap_warnings) {
  if (!(config.tolerance > 0.0) || config.max_iterations < 1) {
    fail(ErrorCode::InvalidArgument, "SCMS needs tolerance > 0 and max_iterations >= 1");
  }
  if (!(eta > 0.0)) fail(ErrorCode::InvalidArgument, "SCMS step size must be positive");
  RunReport report;
  Point z = start;
  std::size_t warnings = 0;
  for (int t = 0; t < config.max_iterations; ++t) {
    bool gap = false;
    Point next = scms_step_impl(model, z, config, eta, &gap);
    warnings += gap ? 1 : 0;
    report.final_step = (next - z).norm();
    report.iterations = t + 1;
    z = std::move(next);
    if (report.final_step <= config.tolerance) {
      report.converged = true;
      break;
    }
  }
  if (eigengap_warnings) *eigengap_warnings = warnings;
  report.final_density = kde_value(model, z);
  report.final_point = std::move(z);
  return report;
}

RidgeResult find_ridge(const KdeModel& model, const std::vector<Point>& starts,
                       const ScmsConfig& config) {
  if (starts.empty()) fail(ErrorCode::InvalidArgument, "find_ridge needs at least one start");
  const ProductSpace& space = model.space();
  if (config.ridge_dim < 0 || config.ridge_dim >= space.intrinsic_dim()) {
    fail(ErrorCode::InvalidArgument, "ridge dimension must satisfy 0 <= d < D_T");
  }
  for (const auto& s : starts) validate_point(space, s, 1e-10);

  RidgeResult out;
  out.step_size = config.step_size.value_or(default_step_size(model.bandwidths()));
  if (!(out.step_size > 0.0)) fail(ErrorCode::InvalidArgument, "SCMS step size must be positive");

  const std::vector<char> low =
      low_density_mask(model, starts, config.denoise_quantile, config.threads);
  out.reports.resize(starts.size());
  std::vector<std::size_t> gaps(starts.size(), 0);
  parallel_for(starts.size(), config.threads, [&](std::size_t i) {
    if (low[i]) {
      out.reports[i].final_point = starts[i];
      return;
    }
    out.reports[i] = run_scms(model, starts[i], config, out.step_size, &gaps[i]);
  });
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (low[i]) {
      ++out.denoised;
      continue;
    }
    out.eigengap_warnings += gaps[i] > 0 ? 1 : 0;
    if (out.reports[i].converged) {
      out.points.push_back(out.reports[i].final_point);
      out.source.push_back(i);
    } else {
      ++out.dropped;
    }
  }
  out.converged = out.points.size();
  if (out.points.empty()) fail(ErrorCode::EmptyResult, "no SCMS trajectory converged");
  return out;
}

}  // namespace prodridge
