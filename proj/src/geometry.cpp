#include "prodridge/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace prodridge {

namespace {

constexpr double kTangentTol = 1e-10;

SpaceKind parse_factor(const std::string& tok, const std::string& whole) {
  if (tok.size() < 2 || (tok[0] != 'r' && tok[0] != 's')) {
    fail(ErrorCode::InvalidArgument, "bad space factor '" + tok + "' in '" + whole + "'");
  }
  if (!std::all_of(tok.begin() + 1, tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    fail(ErrorCode::InvalidArgument, "bad space factor '" + tok + "' in '" + whole + "'");
  }
  const int dim = std::stoi(tok.substr(1));
  return tok[0] == 'r' ? SpaceKind::euclidean(dim) : SpaceKind::sphere(dim);
}

}  // namespace

SpaceKind SpaceKind::euclidean(int D) {
  if (D < 1) fail(ErrorCode::InvalidArgument, "Euclidean factor needs D >= 1");
  return {FactorKind::Euclidean, D};
}

SpaceKind SpaceKind::sphere(int q) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "sphere factor needs q >= 1");
  return {FactorKind::Directional, q};
}

ProductSpace ProductSpace::parse(const std::string& spec) {
  std::string s;
  for (char c : spec) s.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  // the separator 'x' never appears inside a factor token
  const auto pos = s.find('x');
  if (pos == std::string::npos || s.find('x', pos + 1) != std::string::npos) {
    fail(ErrorCode::InvalidArgument, "space must have exactly two factors: '" + spec + "'");
  }
  return {parse_factor(s.substr(0, pos), spec), parse_factor(s.substr(pos + 1), spec)};
}

std::string ProductSpace::to_string() const {
  auto one = [](const SpaceKind& k) {
    return (k.directional() ? "s" : "r") + std::to_string(k.dim);
  };
  return one(first) + "x" + one(second);
}

void check_dimension(const ProductSpace& space, const Vector& z) {
  if (z.size() != space.ambient_dim()) {
    fail(ErrorCode::DimensionMismatch,
         "point has " + std::to_string(z.size()) + " coordinates, space " +
             space.to_string() + " needs " + std::to_string(space.ambient_dim()));
  }
}

void validate_point(const ProductSpace& space, const Vector& z, double tol) {
  check_dimension(space, z);
  if (!z.allFinite()) fail(ErrorCode::InvalidPoint, "point has non-finite coordinates");
  for (int j = 0; j < 2; ++j) {
    if (!space.factor(j).directional()) continue;
    const double norm = block(space, z, j).norm();
    if (std::abs(norm - 1.0) > tol) {
      fail(ErrorCode::InvalidPoint,
           "directional block " + std::to_string(j + 1) + " has norm " + std::to_string(norm));
    }
  }
}

void normalize_directional(const ProductSpace& space, Vector& z) {
  for (int j = 0; j < 2; ++j) {
    if (!space.factor(j).directional()) continue;
    auto b = block(space, z, j);
    const double norm = b.norm();
    if (!(norm >= 1e-300)) {
      fail(ErrorCode::ZeroNorm, "directional block collapsed to zero norm");
    }
    b /= norm;
  }
}

Matrix tangent_projector(const ProductSpace& space, const Point& z) {
  check_dimension(space, z);
  Matrix P = Matrix::Identity(z.size(), z.size());
  for (int j = 0; j < 2; ++j) {
    if (!space.factor(j).directional()) continue;
    const int o = space.offset(j), m = space.block_size(j);
    const Vector x = z.segment(o, m);
    P.block(o, o, m, m) -= x * x.transpose();
  }
  return P;
}

Vector project_tangent(const ProductSpace& space, const Point& z, const Vector& v) {
  check_dimension(space, z);
  check_dimension(space, v);
  Vector out = v;
  for (int j = 0; j < 2; ++j) {
    if (!space.factor(j).directional()) continue;
    const auto x = block(space, z, j);
    auto b = block(space, out, j);
    b -= x.dot(b) * x;
  }
  return out;
}

Matrix radial_directions(const ProductSpace& space, const Point& z) {
  check_dimension(space, z);
  Matrix R = Matrix::Zero(z.size(), space.directional_count());
  int col = 0;
  for (int j = 0; j < 2; ++j) {
    if (!space.factor(j).directional()) continue;
    R.col(col).segment(space.offset(j), space.block_size(j)) = block(space, z, j);
    ++col;
  }
  return R;
}

double factor_distance(const SpaceKind& kind, const Eigen::Ref<const Vector>& a,
                       const Eigen::Ref<const Vector>& b) {
  if (!kind.directional()) return (a - b).norm();
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  // acos loses precision near c = 1; the chord form is exact there
  if (c > 0.9) return 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm()));
  return std::acos(c);
}

double geodesic_distance(const ProductSpace& space, const Point& z1, const Point& z2) {
  check_dimension(space, z1);
  check_dimension(space, z2);
  const double d1 = factor_distance(space.first, block(space, z1, 0), block(space, z2, 0));
  const double d2 = factor_distance(space.second, block(space, z1, 1), block(space, z2, 1));
  return std::hypot(d1, d2);
}

Point exp_map(const ProductSpace& space, const Point& z, const Vector& v) {
  check_dimension(space, z);
  check_dimension(space, v);
  Point out = z;
  for (int j = 0; j < 2; ++j) {
    const auto x = block(space, z, j);
    const auto vx = block(space, v, j);
    auto dst = block(space, out, j);
    if (!space.factor(j).directional()) {
      dst = x + vx;
      continue;
    }
    if (std::abs(x.dot(vx)) > kTangentTol) {
      fail(ErrorCode::NotTangent, "vector is not tangent to directional factor " +
                                      std::to_string(j + 1));
    }
    const double len = vx.norm();
    if (len == 0.0) continue;
    dst = std::cos(len) * x + std::sin(len) * (vx / len);
    dst.normalize();
  }
  return out;
}

}  // namespace prodridge
