#include "prodridge/bandwidth.hpp"

#include <cmath>
#include <numbers>

namespace prodridge {

double rot_directional(const Matrix& X) {
  const Eigen::Index n = X.cols();
  if (n < 2) fail(ErrorCode::InvalidArgument, "directional rule of thumb needs n >= 2");
  if (X.rows() < 2) fail(ErrorCode::DimensionMismatch, "directional data needs >= 2 ambient rows");
  const double q = double(X.rows() - 1);
  const double rbar = X.rowwise().sum().norm() / double(n);
  if (rbar >= 1.0 - 1e-12) {
    fail(ErrorCode::DegenerateSample, "mean resultant length is 1; concentration diverges");
  }
  const double kappa = rbar * (q + 1.0 - rbar) / (1.0 - rbar * rbar);

  // assemble in the log domain: the Bessel values overflow for concentrated samples
  const double log_num = std::log(4.0) + 0.5 * std::log(std::numbers::pi) +
                         2.0 * log_bessel_i(0.5 * (q - 1.0), kappa);
  const double t1 = std::log(2.0 * q) + log_bessel_i(0.5 * (q + 1.0), 2.0 * kappa);
  const double t2 = std::log(q + 2.0) + std::log(kappa) + log_bessel_i(0.5 * (q + 3.0), 2.0 * kappa);
  const double hi = std::max(t1, t2);
  const double log_bracket = hi + std::log(std::exp(t1 - hi) + std::exp(t2 - hi));
  const double log_den = 0.5 * (q + 1.0) * std::log(kappa) + log_bracket + std::log(double(n));
  return std::exp((log_num - log_den) / (q + 4.0));
}

double normal_reference_linear(const Matrix& Y) {
  const Eigen::Index n = Y.cols();
  if (n < 2) fail(ErrorCode::InvalidArgument, "normal reference rule needs n >= 2");
  const double D = double(Y.rows());
  const Vector mean = Y.rowwise().mean();
  const Vector var = (Y.colwise() - mean).rowwise().squaredNorm() / double(n - 1);
  const double sbar = var.cwiseSqrt().mean();
  if (!(sbar > 0.0)) fail(ErrorCode::ZeroVariance, "linear block has zero variance");
  return sbar * std::pow(4.0 / (D + 4.0), 1.0 / (D + 6.0)) * std::pow(double(n), -1.0 / (D + 6.0));
}

Bandwidths select_bandwidths(const ProductSpace& space, const Matrix& data) {
  if (data.rows() != space.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, "data rows do not match space " + space.to_string());
  }
  double h[2];
  for (int j = 0; j < 2; ++j) {
    const Matrix blk = data.middleRows(space.offset(j), space.block_size(j));
    h[j] = space.factor(j).directional() ? rot_directional(blk) : normal_reference_linear(blk);
  }
  return {h[0], h[1]};
}

}  // namespace prodridge
