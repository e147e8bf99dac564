#include "hardedge/parametrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardedge/errors.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge::parametrix {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);
constexpr double kSideOffset = 1e-13;

void check_alpha(double alpha) {
    if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
}

// Entries before the sector factor, given the chosen square root of z.
Matrix2C base(double alpha, cd sqrt_z) {
    const cd w = 2.0 * sqrt_z;
    Matrix2C B;
    B(0, 0) = specfun::bessel_I(alpha, w);
    B(0, 1) = kI / kPi * specfun::bessel_K(alpha, w);
    B(1, 0) = 2.0 * kPi * kI * sqrt_z * specfun::bessel_I_prime(alpha, w);
    B(1, 1) = -2.0 * sqrt_z * specfun::bessel_K_prime(alpha, w);
    return B;
}

// Right factors in the sectors 2pi/3 < +-arg z < pi.
Matrix2C upper_factor(double alpha) {
    Matrix2C F = Matrix2C::Identity();
    F(1, 0) = -std::polar(1.0, kPi * alpha);
    return F;
}
Matrix2C lower_factor(double alpha) {
    Matrix2C F = Matrix2C::Identity();
    F(1, 0) = std::polar(1.0, -kPi * alpha);
    return F;
}

double maxabs(const Matrix2C& M) { return M.cwiseAbs().maxCoeff(); }

Matrix2C u0() {
    Matrix2C U;
    U << 1.0, kI, kI, 1.0;
    return U / std::sqrt(2.0);
}

// F_alpha(z) = sum z^k / (k! Gamma(alpha + k + 1)) and its derivative.
std::pair<double, double> entire_F(double alpha, double z) {
    double term = 1.0 / specfun::gamma_fn(alpha + 1.0);
    double f = term, df = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= z / (k * (alpha + k));
        f += term;
        df += k * term / z;
        if (std::abs(term) < 1e-18 * std::abs(f)) break;
    }
    return {f, df};
}

}  // namespace

Matrix2C phi(double alpha, cd z) {
    check_alpha(alpha);
    if (z.imag() == 0.0 && z.real() <= 0.0) throw DomainError("z on the cut; use phi_boundary");
    Matrix2C B = base(alpha, std::sqrt(z));
    const double arg = std::arg(z);
    if (arg > 2.0 * kPi / 3.0) return B * upper_factor(alpha);
    if (arg < -2.0 * kPi / 3.0) return B * lower_factor(alpha);
    return B;
}

Matrix2C phi_real(double alpha, double z) {
    check_alpha(alpha);
    if (!(z > 0.0)) throw DomainError("phi_real requires z > 0");
    const double r = std::sqrt(z), w = 2.0 * r;
    Matrix2C B;
    B(0, 0) = specfun::bessel_I(alpha, w);
    B(0, 1) = kI / kPi * specfun::bessel_K(alpha, w);
    B(1, 0) = 2.0 * kPi * kI * r * specfun::bessel_I_prime(alpha, w);
    B(1, 1) = -2.0 * r * specfun::bessel_K_prime(alpha, w);
    return B;
}

Matrix2C phi_boundary(double alpha, Ray ray, double r, Side side) {
    check_alpha(alpha);
    if (!(r > 0.0)) throw DomainError("boundary point must be off the origin");
    const double sr = std::sqrt(r);
    const bool plus = side == Side::Plus;
    switch (ray) {
        case Ray::Gamma0:
            // + side is the upper half plane: sqrt(z)_+ = i sqrt(r).
            return plus ? Matrix2C(base(alpha, kI * sr) * upper_factor(alpha))
                        : Matrix2C(base(alpha, -kI * sr) * lower_factor(alpha));
        case Ray::GammaPlus:
        case Ray::GammaMinus: {
            // Approach the ray from either side; the + side of Gamma_+ is the central sector,
            // the + side of Gamma_- is the lower sector.
            const double ray_arg = (ray == Ray::GammaPlus ? 1.0 : -1.0) * 2.0 * kPi / 3.0;
            const double toward_center = (ray == Ray::GammaPlus ? -1.0 : 1.0) * kSideOffset;
            return phi(alpha, std::polar(r, ray_arg + (plus == (ray == Ray::GammaPlus) ? toward_center
                                                                                       : -toward_center)));
        }
    }
    throw DomainError("unknown ray");
}

Matrix2C jump_matrix(double alpha, Ray ray) {
    Matrix2C J = Matrix2C::Identity();
    switch (ray) {
        case Ray::Gamma0:
            J << 0.0, 1.0, -1.0, 0.0;
            break;
        case Ray::GammaPlus:
            J(1, 0) = std::polar(1.0, kPi * alpha);
            break;
        case Ray::GammaMinus:
            J(1, 0) = std::polar(1.0, -kPi * alpha);
            break;
    }
    return J;
}

double jump_residual(double alpha, Ray ray, double r) {
    const Matrix2C P = phi_boundary(alpha, ray, r, Side::Plus);
    const Matrix2C M = phi_boundary(alpha, ray, r, Side::Minus);
    return maxabs(P - M * jump_matrix(alpha, ray)) / std::max(1.0, maxabs(P));
}

double det_residual(double alpha, cd z) { return std::abs(phi(alpha, z).determinant() - 1.0); }

double alpha_symbol(double alpha, int k) {
    if (k < 0) throw DomainError("k must be non-negative");
    double v = 1.0;
    for (int j = 1; j <= k; ++j) v *= (4.0 * alpha * alpha - (2.0 * j - 1.0) * (2.0 * j - 1.0)) / (4.0 * j);
    return v;
}

std::pair<double, double> expansion_coefficients(double alpha, int k) {
    if (k < 1) throw DomainError("k must be at least 1");
    const double prev = alpha_symbol(alpha, k - 1);
    const double p4 = std::pow(4.0, k);
    return {prev / (p4 * k) * (alpha * alpha + 0.5 * k - 0.25), prev / p4 * (k - 0.5)};
}

Matrix2C psi_infinity_coefficient(double alpha, int k) {
    if (k < 1) throw DomainError("k must be at least 1");
    const auto [a1, b1] = expansion_coefficients(alpha, 1);
    const auto [a_lo, b_lo] = expansion_coefficients(alpha, 2 * k - 1);
    const auto [a_mid, b_mid] = expansion_coefficients(alpha, 2 * k);
    const auto [a_hi, b_hi] = expansion_coefficients(alpha, 2 * k + 1);
    Matrix2C L = Matrix2C::Identity();
    L(1, 0) = kI * (a1 + b1);
    Matrix2C C;
    C << a_mid - b_mid, kI * (a_lo - b_lo), -kI * (a_hi + b_hi), a_mid + b_mid;
    return L * C;
}

Matrix2C psi_real(double alpha, double z) {
    const auto [a1, b1] = expansion_coefficients(alpha, 1);
    Matrix2C L = Matrix2C::Identity();
    L(1, 0) = kI * (a1 + b1);
    Matrix2C S = Matrix2C::Zero();
    S(0, 0) = std::sqrt(2.0 * kPi);
    S(1, 1) = 1.0 / std::sqrt(2.0 * kPi);
    return L * S * phi_real(alpha, z);
}

Matrix2C normalized_remainder(double alpha, double z) {
    const Matrix2C P = psi_real(alpha, z);
    const double e = std::exp(-2.0 * std::sqrt(z));
    Matrix2C D = Matrix2C::Zero();
    D(0, 0) = e;
    D(1, 1) = 1.0 / e;
    Matrix2C Z = Matrix2C::Zero();
    Z(0, 0) = std::pow(z, 0.25);
    Z(1, 1) = std::pow(z, -0.25);
    return P * D * u0().inverse() * Z;
}

AsymptoticMatch asymptotic_match(double alpha, double z_large) {
    check_alpha(alpha);
    if (!(z_large > 0.0)) throw DomainError("z must be positive");
    AsymptoticMatch r;
    r.z = z_large;
    const Matrix2C P = psi_real(alpha, z_large);
    const double lead = std::pow(z_large, -0.25) / std::sqrt(2.0) * std::exp(2.0 * std::sqrt(z_large));
    r.rel_err_11 = std::abs(P(0, 0) / lead - 1.0);
    // z (M(z) - I) = Psi_1 + Psi_2 / z + ...; two Richardson levels in 1/z.
    const auto c = [&](double z) -> Matrix2C { return z * (normalized_remainder(alpha, z) - Matrix2C::Identity()); };
    const Matrix2C c1 = c(z_large), c2 = c(2.0 * z_large), c4 = c(4.0 * z_large);
    const Matrix2C r1 = 2.0 * c2 - c1, r2 = 2.0 * c4 - c2;
    r.fitted_psi1 = (4.0 * r2 - r1) / 3.0;
    r.predicted_psi1 = psi_infinity_coefficient(alpha, 1);
    r.coefficient_error_12 = std::abs(r.fitted_psi1(0, 1) - kI * (4.0 * alpha * alpha - 1.0) / 16.0);
    r.coefficient_error = maxabs(r.fitted_psi1 - r.predicted_psi1);
    return r;
}

Matrix2C value_at_zero(double alpha) {
    check_alpha(alpha);
    Matrix2C V;
    if (alpha == 0.0) {
        V << 1.0, -kI / kPi * std::log(2.0), 0.0, 1.0;
        return V;
    }
    const double g = specfun::gamma_fn(alpha + 1.0);
    const double ga = g / alpha;  // Gamma(alpha), valid for alpha in (-1, 0) too
    V << 1.0 / g, kI * ga / (2.0 * kPi), kPi * kI / ga, g / 2.0;
    return V;
}

Matrix2C analytic_factor(double alpha, double z) {
    check_alpha(alpha);
    if (!(z > 0.0)) throw DomainError("analytic_factor requires z > 0");
    const Matrix2C P = base(alpha, cd(std::sqrt(z), 0.0));
    const double rounded = std::round(alpha);
    const cd a = (alpha == rounded) ? std::polar(1.0, kPi * alpha) * std::log(z) / (2.0 * kPi * kI)
                                    : 1.0 / (2.0 * kI * std::sin(alpha * kPi));
    Matrix2C F;
    F.col(0) = P.col(0) * std::pow(z, -0.5 * alpha);
    F.col(1) = (P.col(1) - a * P.col(0)) * std::pow(z, 0.5 * alpha);
    return F;
}

Matrix2C value_at_zero_numeric(double alpha) { return analytic_factor(alpha, 1e-14); }

double column1_identity_residual(double alpha) {
    double sup = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double z = 0.1 * i;
        const auto [f, df] = entire_F(alpha, z);
        const cd lhs = std::pow(z, -0.5 * alpha) * phi_real(alpha, z)(1, 0);
        const cd rhs = kPi * kI * alpha * f + 2.0 * kPi * kI * z * df;
        sup = std::max(sup, std::abs(lhs - rhs));
    }
    return sup;
}

}  // namespace hardedge::parametrix
