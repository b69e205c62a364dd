#pragma once

#include <optional>
#include <vector>

#include "prodridge/density.hpp"

namespace prodridge {

enum class MeanShiftVariant {
  Simultaneous,   // update both blocks from z^t, then renormalize
  Componentwise,  // update x from (x^t, y^t), then y from (x^{t+1}, y^t)
};

struct MeanShiftConfig {
  MeanShiftVariant variant = MeanShiftVariant::Simultaneous;
  double tolerance = 1e-7;
  int max_iterations = 5000;
  /// Starts whose density is below this quantile of the density over the
  /// model's data are dropped before iterating. 0 disables.
  double denoise_quantile = 0.05;
  /// Geodesic single-linkage radius for merging endpoints; default min(h1,h2)/2.
  std::optional<double> merge_radius;
  /// Keep the per-iteration density sequence in each report.
  bool record_trace = false;
  int threads = 0;
};

/// Summary of one trajectory (mean shift or SCMS).
struct RunReport {
  bool converged = false;
  int iterations = 0;
  double final_step = 0.0;
  Point final_point;
  double final_density = 0.0;
  std::vector<double> density_trace;  // only when requested
};

struct ModeSet {
  std::vector<Point> modes;
  std::vector<double> density_values;
  /// Largest tangent Hessian eigenvalue at each mode (negative for true modes).
  std::vector<double> top_eigenvalues;
  /// Mode index per start; -1 for starts that were denoised, did not
  /// converge, or reached a non-maximum.
  std::vector<int> basin_labels;
  /// One report per start; denoised starts have iterations == 0 and converged == false.
  std::vector<RunReport> reports;

  std::size_t denoised = 0;
  std::size_t converged = 0;
  std::size_t dropped = 0;
  std::size_t rejected_saddles = 0;
};

/// Xi(z): per-block weighted data mean minus z.
Vector mean_shift_vector(const KdeModel& model, const Point& z);

Point mean_shift_step(const KdeModel& model, const Point& z, MeanShiftVariant variant);

/// Iterates mean_shift_step from `start` until the ambient step norm drops
/// to the tolerance or max_iterations is hit.
RunReport run_mean_shift(const KdeModel& model, const Point& start, const MeanShiftConfig& config);

/// Denoise, iterate every start, drop non-converged runs, and merge endpoints
/// into modes. Throws EmptyResult when nothing survives.
ModeSet find_modes(const KdeModel& model, const std::vector<Point>& starts,
                   const MeanShiftConfig& config);

/// Flags starts whose density falls below the q-quantile of the density
/// over the model's own data (1 = drop). q = 0 flags nothing.
std::vector<char> low_density_mask(const KdeModel& model, const std::vector<Point>& starts,
                                   double q, int threads = 0);

/// Linear-interpolation quantile (type 7) of `values`, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Single-linkage clusters over points sorted lexicographically; returns a
/// cluster id per input point, ids numbered in sorted order.
std::vector<int> single_linkage(const ProductSpace& space, const std::vector<Point>& pts,
                                double radius);

}  // namespace prodridge
