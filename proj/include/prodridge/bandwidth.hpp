#pragma once

#include "prodridge/geometry.hpp"
#include "prodridge/kernels.hpp"

namespace prodridge {

/// Rule-of-thumb bandwidth for von Mises smoothing on Omega_q, from a vMF
/// reference fit. `X` holds one unit vector per column (q+1 rows).
///   kappa = R (q + 1 - R) / (1 - R^2),  R = |sum X_i| / n
///   h = [4 sqrt(pi) I_{(q-1)/2}(kappa)^2 /
///        (kappa^{(q+1)/2} (2q I_{(q+1)/2}(2 kappa) + (q+2) kappa I_{(q+3)/2}(2 kappa)) n)]^{1/(q+4)}
/// Throws DegenerateSample when R >= 1 - 1e-12.
double rot_directional(const Matrix& X);

/// Normal reference rule for Gaussian smoothing on R^D; `Y` holds one point
/// per column. Uses the mean of per-coordinate sample standard deviations
/// (n - 1 divisor). Throws ZeroVariance when that mean is 0.
double normal_reference_linear(const Matrix& Y);

/// Selects each factor's bandwidth from its own block of `data`
/// (ambient_dim x n): rot_directional on spheres, normal reference otherwise.
Bandwidths select_bandwidths(const ProductSpace& space, const Matrix& data);

}  // namespace prodridge
