#include "prodridge/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prodridge/parallel.hpp"

namespace prodridge {

namespace {

const double kLogUnderflow = std::log(1e-300);

// Kernel sums at one query point. The true sums are exp(log_scale) times the
// stored ones; for exponential kernels log_scale = -min_i exponent so the
// largest term is exactly 1.
struct Sums {
  double log_scale = 0.0;
  double s0 = 0.0;  // sum k1 k2
  double sx = 0.0;  // sum k1' k2
  double sy = 0.0;  // sum k1 k2'
  Vector gx;        // sum k1' k2 (x - X_i)
  Vector gy;        // sum k1 k2' (y - Y_i)
  Matrix second;    // blocks: k1'' k2 dx dx^T, k1' k2' dx dy^T, k1 k2'' dy dy^T
};

Sums accumulate(const KdeModel& model, const Point& z, int order) {
  const ProductSpace& space = model.space();
  check_dimension(space, z);
  const int p = space.ambient_dim();
  const int a = space.block_size(0);
  const Eigen::Index n = model.size();
  const double* Z = model.data().data();
  const double* q = z.data();
  const double h1 = model.bandwidths().h1, h2 = model.bandwidths().h2;
  const double c1 = 0.5 / (h1 * h1), c2 = 0.5 / (h2 * h2);
  const bool expo = model.exponential();

  Sums out;
  out.gx = Vector::Zero(a);
  out.gy = Vector::Zero(p - a);
  if (order >= 2) out.second = Matrix::Zero(p, p);

  std::vector<double> rs(2 * n);
  double min_exp = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* zi = Z + i * p;
    double r = 0.0, s = 0.0;
    for (int k = 0; k < a; ++k) r += (q[k] - zi[k]) * (q[k] - zi[k]);
    for (int k = a; k < p; ++k) s += (q[k] - zi[k]) * (q[k] - zi[k]);
    rs[2 * i] = r * c1;
    rs[2 * i + 1] = s * c2;
    min_exp = std::min(min_exp, rs[2 * i] + rs[2 * i + 1]);
  }
  if (expo) out.log_scale = -min_exp;

  const KernelProfile& k1 = model.profile(0);
  const KernelProfile& k2 = model.profile(1);
  double dz[64];
  std::vector<double> dzbuf;
  double* d = dz;
  if (p > 64) {
    dzbuf.resize(p);
    d = dzbuf.data();
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = rs[2 * i], s = rs[2 * i + 1];
    double w00, w10, w01, w20 = 0.0, w11 = 0.0, w02 = 0.0;
    if (expo) {
      const double w = std::exp(-(r + s) - out.log_scale);
      w00 = w;
      w10 = -w;
      w01 = -w;
      w20 = w;
      w11 = w;
      w02 = w;
    } else {
      const double a0 = k1.value(r), a1 = k1.derivative(r);
      const double b0 = k2.value(s), b1 = k2.derivative(s);
      w00 = a0 * b0;
      w10 = a1 * b0;
      w01 = a0 * b1;
      if (order >= 2) {
        w20 = k1.second_derivative(r) * b0;
        w11 = a1 * b1;
        w02 = a0 * k2.second_derivative(s);
      }
    }
    out.s0 += w00;
    if (order < 1) continue;
    const double* zi = Z + i * p;
    for (int k = 0; k < p; ++k) d[k] = q[k] - zi[k];
    out.sx += w10;
    out.sy += w01;
    for (int k = 0; k < a; ++k) out.gx[k] += w10 * d[k];
    for (int k = a; k < p; ++k) out.gy[k - a] += w01 * d[k];
    if (order < 2) continue;
    for (int u = 0; u < p; ++u) {
      for (int v = u; v < p; ++v) {
        const double c = u < a ? (v < a ? w20 : w11) : w02;
        out.second(u, v) += c * d[u] * d[v];
      }
    }
  }
  if (order >= 2) out.second.triangularView<Eigen::StrictlyLower>() = out.second.transpose();
  return out;
}

double log_density_from(const KdeModel& model, const Sums& s) {
  if (!(s.s0 > 0.0)) return -std::numeric_limits<double>::infinity();
  return model.log_normalizer() - std::log(double(model.size())) + s.log_scale + std::log(s.s0);
}

// grad f / f and hess f / f from the sums.
void ratio_derivatives(const KdeModel& model, const Sums& s, Vector* grad, Matrix* hess) {
  if (!(s.s0 > 0.0)) {
    fail(ErrorCode::DensityUnderflow, "all kernel weights vanish at the query point");
  }
  const ProductSpace& space = model.space();
  const int a = space.block_size(0);
  const int p = space.ambient_dim();
  const double h1 = model.bandwidths().h1, h2 = model.bandwidths().h2;
  const double i1 = 1.0 / (h1 * h1), i2 = 1.0 / (h2 * h2);
  if (grad) {
    grad->resize(p);
    grad->head(a) = s.gx * (i1 / s.s0);
    grad->tail(p - a) = s.gy * (i2 / s.s0);
  }
  if (hess) {
    const Vector& inv = model.inverse_bandwidth_diag();
    Matrix H = inv.asDiagonal() * s.second * inv.asDiagonal();
    H.topLeftCorner(a, a).diagonal().array() += s.sx * i1;
    H.bottomRightCorner(p - a, p - a).diagonal().array() += s.sy * i2;
    *hess = H / s.s0;
  }
}

DensityJet build_jet(const KdeModel& model, const Point& z, bool log_form) {
  const Sums s = accumulate(model, z, 2);
  DensityJet jet;
  jet.log_density = log_density_from(model, s);
  jet.density = std::exp(jet.log_density);
  if (log_form && jet.log_density < kLogUnderflow) {
    fail(ErrorCode::DensityUnderflow, "density below 1e-300; log-density undefined");
  }
  Vector g;
  Matrix H;
  ratio_derivatives(model, s, &g, &H);
  if (log_form) {
    jet.value = jet.log_density;
    jet.total_gradient = g;
    jet.total_hessian = H - g * g.transpose();
  } else {
    jet.value = jet.density;
    jet.total_gradient = jet.density * g;
    jet.total_hessian = jet.density * H;
  }
  jet.riem_gradient = project_tangent(model.space(), z, jet.total_gradient);
  jet.riem_hessian =
      riemannian_hessian_from(model.space(), z, jet.total_gradient, jet.total_hessian);
  return jet;
}

}  // namespace

KdeModel::KdeModel(ProductSpace space, Matrix data, Bandwidths h)
    : KdeModel(space, std::move(data), h, KernelProfile::for_factor(space.first),
               KernelProfile::for_factor(space.second)) {}

KdeModel::KdeModel(ProductSpace space, Matrix data, Bandwidths h, KernelProfile k1,
                   KernelProfile k2)
    : space_(space), data_(std::move(data)), h_(h), k1_(std::move(k1)), k2_(std::move(k2)) {
  if (data_.cols() < 1) fail(ErrorCode::InvalidArgument, "KDE needs at least one data point");
  if (data_.rows() != space_.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch, "data rows do not match space " + space_.to_string());
  }
  for (Eigen::Index i = 0; i < data_.cols(); ++i) {
    validate_point(space_, data_.col(i), 1e-12);
  }
  log_norm_ = log_factor_normalizer(space_.first, k1_, h_.h1) +
              log_factor_normalizer(space_.second, k2_, h_.h2);
  hdiag_ = bandwidth_diagonal(space_, h_);
  inv_hdiag_ = hdiag_.cwiseInverse();
}

Matrix points_to_matrix(const std::vector<Point>& pts, int ambient_dim) {
  Matrix m(ambient_dim, Eigen::Index(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != ambient_dim) {
      fail(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " has wrong size");
    }
    m.col(Eigen::Index(i)) = pts[i];
  }
  return m;
}

std::vector<Point> matrix_to_points(const Matrix& m) {
  std::vector<Point> out;
  out.reserve(std::size_t(m.cols()));
  for (Eigen::Index i = 0; i < m.cols(); ++i) out.emplace_back(m.col(i));
  return out;
}

double log_kde_value(const KdeModel& model, const Point& z) {
  return log_density_from(model, accumulate(model, z, 0));
}

double kde_value(const KdeModel& model, const Point& z) {
  return std::exp(log_kde_value(model, z));
}

Vector kde_total_gradient(const KdeModel& model, const Point& z) {
  const Sums s = accumulate(model, z, 1);
  const double f = std::exp(log_density_from(model, s));
  if (f == 0.0) return Vector::Zero(z.size());
  Vector g;
  ratio_derivatives(model, s, &g, nullptr);
  return f * g;
}

Matrix kde_total_hessian(const KdeModel& model, const Point& z) {
  return density_jet(model, z).total_hessian;
}

Vector riemannian_gradient(const KdeModel& model, const Point& z) {
  return project_tangent(model.space(), z, kde_total_gradient(model, z));
}

Matrix riemannian_hessian(const KdeModel& model, const Point& z) {
  return density_jet(model, z).riem_hessian;
}

DensityJet density_jet(const KdeModel& model, const Point& z) { return build_jet(model, z, false); }

DensityJet log_density_jet(const KdeModel& model, const Point& z) {
  return build_jet(model, z, true);
}

Matrix riemannian_hessian_from(const ProductSpace& space, const Point& z, const Vector& grad,
                               const Matrix& hess) {
  Matrix M = hess;
  for (int j = 0; j < 2; ++j) {
    if (!space.factor(j).directional()) continue;
    const int o = space.offset(j), m = space.block_size(j);
    const double radial = z.segment(o, m).dot(grad.segment(o, m));
    M.block(o, o, m, m).diagonal().array() -= radial;
  }
  const Matrix P = tangent_projector(space, z);
  Matrix R = P * M * P;
  return 0.5 * (R + R.transpose());
}

MeanShiftDecomposition mean_shift_decomposition(const KdeModel& model, const Point& z) {
  const Sums s = accumulate(model, z, 1);
  if (!(s.sx < 0.0) || !(s.sy < 0.0)) {
    fail(ErrorCode::DegenerateWeights,
         "mean-shift weights vanish; query point is too far from the data for these bandwidths");
  }
  const ProductSpace& space = model.space();
  const int a = space.block_size(0);
  MeanShiftDecomposition out;
  out.xi.resize(z.size());
  out.xi.head(a) = -s.gx / s.sx;
  out.xi.tail(z.size() - a) = -s.gy / s.sy;
  const double scale = std::exp(model.log_normalizer() + s.log_scale) / double(model.size());
  const double h1 = model.bandwidths().h1, h2 = model.bandwidths().h2;
  out.g_x = -scale * s.sx / (h1 * h1);
  out.g_y = -scale * s.sy / (h2 * h2);
  return out;
}

Vector mean_shift_block(const KdeModel& model, const Point& z, int j) {
  const Vector xi = mean_shift_decomposition(model, z).xi;
  return xi.segment(model.space().offset(j), model.space().block_size(j));
}

Vector kde_values(const KdeModel& model, const std::vector<Point>& pts, int threads) {
  Vector out(Eigen::Index(pts.size()));
  parallel_for(pts.size(), threads, [&](std::size_t i) { out[Eigen::Index(i)] = kde_value(model, pts[i]); });
  return out;
}

}  // namespace prodridge
