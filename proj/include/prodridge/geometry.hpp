#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>

#include "prodridge/error.hpp"

namespace prodridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point z = (x, y) in ambient coordinates: the first factor's block
/// followed by the second factor's block. Directional blocks have unit norm.
using Point = Eigen::VectorXd;

enum class FactorKind { Euclidean, Directional };

/// One factor of the product space: R^D or the unit sphere Omega_q in R^{q+1}.
struct SpaceKind {
  FactorKind kind = FactorKind::Euclidean;
  int dim = 1;  // intrinsic dimension (D or q)

  static SpaceKind euclidean(int D);
  static SpaceKind sphere(int q);

  bool directional() const { return kind == FactorKind::Directional; }
  int intrinsic_dim() const { return dim; }
  int ambient_dim() const { return directional() ? dim + 1 : dim; }

  friend bool operator==(const SpaceKind&, const SpaceKind&) = default;
};

/// S1 x S2 with the block layout used everywhere in the library.
struct ProductSpace {
  SpaceKind first;
  SpaceKind second;

  ProductSpace() = default;
  ProductSpace(SpaceKind a, SpaceKind b) : first(a), second(b) {}

  /// Parses `rK` / `sK` factors joined by `x`, e.g. "s2xr1", "s1xs1".
  static ProductSpace parse(const std::string& spec);
  std::string to_string() const;

  const SpaceKind& factor(int j) const { return j == 0 ? first : second; }
  int offset(int j) const { return j == 0 ? 0 : first.ambient_dim(); }
  int block_size(int j) const { return factor(j).ambient_dim(); }

  int ambient_dim() const { return first.ambient_dim() + second.ambient_dim(); }
  int intrinsic_dim() const { return first.intrinsic_dim() + second.intrinsic_dim(); }
  int directional_count() const {
    return int(first.directional()) + int(second.directional());
  }

  friend bool operator==(const ProductSpace&, const ProductSpace&) = default;
};

inline auto block(const ProductSpace& s, const Vector& z, int j) {
  return z.segment(s.offset(j), s.block_size(j));
}
inline auto block(const ProductSpace& s, Vector& z, int j) {
  return z.segment(s.offset(j), s.block_size(j));
}

void check_dimension(const ProductSpace& space, const Vector& z);

/// Throws unless z has the right size and every directional block is
/// unit-norm within `tol`.
void validate_point(const ProductSpace& space, const Vector& z, double tol = 1e-12);

/// Rescales each directional block to unit norm. Throws ZeroNorm when a
/// block's norm is below 1e-300.
void normalize_directional(const ProductSpace& space, Vector& z);

/// Block-diagonal projector onto T_z: I - x x^T on directional blocks and
/// I on Euclidean blocks.
Matrix tangent_projector(const ProductSpace& space, const Point& z);

/// P_z v without forming the matrix.
Vector project_tangent(const ProductSpace& space, const Point& z, const Vector& v);

/// Unit radial directions (x, 0) / (0, y), one column per directional factor.
Matrix radial_directions(const ProductSpace& space, const Point& z);

/// Per-factor distance: arc length on a sphere, Euclidean norm otherwise.
double factor_distance(const SpaceKind& kind, const Eigen::Ref<const Vector>& a,
                       const Eigen::Ref<const Vector>& b);

double geodesic_distance(const ProductSpace& space, const Point& z1, const Point& z2);

/// Exponential map of the product manifold; factorizes over the two blocks.
/// Requires |x . v_x| <= 1e-10 on each directional block.
Point exp_map(const ProductSpace& space, const Point& z, const Vector& v);

}  // namespace prodridge
