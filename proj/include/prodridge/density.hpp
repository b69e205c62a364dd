#pragma once

#include <vector>

#include "prodridge/geometry.hpp"
#include "prodridge/kernels.hpp"

namespace prodridge {

/// Product-kernel KDE on S1 x S2. Immutable after construction; every query
/// is read-only and safe to issue from many threads at once.
///
/// Queries accept any ambient point of the right size. Off the manifold the
/// density is the ambient extension exp(-(z - Z_i)^T H^{-1} (z - Z_i) / 2),
/// which is what the total gradient and Hessian differentiate.
class KdeModel {
 public:
  /// `data` holds one point per column (ambient_dim x n). Kernels default to
  /// von Mises on directional factors and Gaussian on Euclidean ones.
  KdeModel(ProductSpace space, Matrix data, Bandwidths h);
  KdeModel(ProductSpace space, Matrix data, Bandwidths h, KernelProfile k1, KernelProfile k2);

  const ProductSpace& space() const { return space_; }
  const Matrix& data() const { return data_; }
  const Bandwidths& bandwidths() const { return h_; }
  const KernelProfile& profile(int j) const { return j == 0 ? k1_ : k2_; }
  Eigen::Index size() const { return data_.cols(); }

  /// log C(h) for the attached profiles (0 contribution from custom ones).
  double log_normalizer() const { return log_norm_; }
  bool exponential() const { return k1_.exponential() && k2_.exponential(); }

  /// Diagonal of H and of H^{-1}.
  const Vector& bandwidth_diag() const { return hdiag_; }
  const Vector& inverse_bandwidth_diag() const { return inv_hdiag_; }

 private:
  ProductSpace space_;
  Matrix data_;
  Bandwidths h_;
  KernelProfile k1_, k2_;
  double log_norm_ = 0.0;
  Vector hdiag_, inv_hdiag_;
};

Matrix points_to_matrix(const std::vector<Point>& pts, int ambient_dim);
std::vector<Point> matrix_to_points(const Matrix& m);

/// Value and derivatives of either f or log f at one point. For the plain
/// jet `value` is f; for the log jet it is log f. `density` and
/// `log_density` always refer to f.
struct DensityJet {
  double value = 0.0;
  double density = 0.0;
  double log_density = 0.0;
  Vector total_gradient;
  Matrix total_hessian;
  Vector riem_gradient;
  Matrix riem_hessian;
};

double kde_value(const KdeModel& model, const Point& z);
double log_kde_value(const KdeModel& model, const Point& z);
Vector kde_total_gradient(const KdeModel& model, const Point& z);
Matrix kde_total_hessian(const KdeModel& model, const Point& z);
Vector riemannian_gradient(const KdeModel& model, const Point& z);
Matrix riemannian_hessian(const KdeModel& model, const Point& z);

/// All derivatives of f from one pass over the data.
DensityJet density_jet(const KdeModel& model, const Point& z);

/// Derivatives of log f. Throws DensityUnderflow when f < 1e-300.
DensityJet log_density_jet(const KdeModel& model, const Point& z);

/// P_z [hess - Diag(A1, A2)] P_z where A_j = (x_j . grad_j) I on directional
/// blocks and 0 on Euclidean ones. Symmetrized on return.
Matrix riemannian_hessian_from(const ProductSpace& space, const Point& z, const Vector& grad,
                               const Matrix& hess);

/// The mean-shift split of the total gradient: grad f = Diag(g_x I, g_y I) xi,
/// where xi is the mean-shift vector and g_x, g_y >= 0 for decreasing profiles.
struct MeanShiftDecomposition {
  Vector xi;
  double g_x = 0.0;
  double g_y = 0.0;
};

/// Throws DegenerateWeights if either weighted sum vanishes.
MeanShiftDecomposition mean_shift_decomposition(const KdeModel& model, const Point& z);

/// Mean-shift vector restricted to one block (0 or 1), evaluated at z.
Vector mean_shift_block(const KdeModel& model, const Point& z, int j);

/// f at many points, partitioned across threads (0 = default count).
Vector kde_values(const KdeModel& model, const std::vector<Point>& pts, int threads = 0);

}  // namespace prodridge
