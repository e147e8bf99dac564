#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

namespace hardedge {

using Matrix2C = Eigen::Matrix2cd;

namespace parametrix {

enum class Ray { Gamma0, GammaPlus, GammaMinus };
enum class Side { Plus, Minus };

/// Bessel parametrix at z off the jump contour (principal branches, sector factors applied).
Matrix2C phi(double alpha, std::complex<double> z);
/// Real z > 0 of any size, through real Bessel functions.
Matrix2C phi_real(double alpha, double z);
/// Boundary value on a ray at distance r > 0 from the origin.
Matrix2C phi_boundary(double alpha, Ray ray, double r, Side side);
Matrix2C jump_matrix(double alpha, Ray ray);
/// max |Phi_+ - Phi_- J| / max(1, max |Phi_+|).
double jump_residual(double alpha, Ray ray, double r);
double det_residual(double alpha, std::complex<double> z);

/// (alpha, k) = prod_{j=1..k} (4 alpha^2 - (2j-1)^2) / (4^k k!).
double alpha_symbol(double alpha, int k);
/// (a_k, b_k).
std::pair<double, double> expansion_coefficients(double alpha, int k);
/// k-th coefficient of the 1/z expansion of the normalized parametrix.
Matrix2C psi_infinity_coefficient(double alpha, int k);

/// Normalized parametrix (I + i(a1 + b1) E21) (2 pi)^{sigma3/2} Phi for real z > 0.
Matrix2C psi_real(double alpha, double z);
/// Psi e^{-2 z^{1/2} sigma3} U0^{-1} z^{sigma3/4} = I + Psi_1/z + ...
Matrix2C normalized_remainder(double alpha, double z);

struct AsymptoticMatch {
    double z = 0.0;
    double rel_err_11 = 0.0;    ///< |(Psi)_11 / (z^{-1/4} e^{2 sqrt z}/sqrt 2) - 1|
    Matrix2C fitted_psi1;       ///< Richardson fit from z, 2z, 4z
    Matrix2C predicted_psi1;
    double coefficient_error_12 = 0.0;  ///< |fitted (Psi_1)_12 - i(4 alpha^2 - 1)/16|
    double coefficient_error = 0.0;     ///< max entrywise |fitted - predicted|
};
AsymptoticMatch asymptotic_match(double alpha, double z_large);

/// Closed-form value of the analytic factor at the origin, as published.
Matrix2C value_at_zero(double alpha);
/// The analytic factor Phi z^{-alpha sigma3/2}-stripped, evaluated at small z > 0 from the definition.
Matrix2C analytic_factor(double alpha, double z);
Matrix2C value_at_zero_numeric(double alpha);

/// sup over z in (0, 5] of |z^{-alpha/2} Phi_21 - (pi i alpha F_alpha + 2 pi i z F_alpha')|.
double column1_identity_residual(double alpha);

}  // namespace parametrix
}  // namespace hardedge
