#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "hardedge/polynomial.hpp"

namespace hardedge::specfun {

/// Nodes and positive weights of a composite quadrature rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lo = 0.0;
    double hi = 0.0;          ///< +inf for semi-infinite rules
    double map_scale = 0.0;   ///< L of x = lo + L*y/(1-y); 0 for finite rules

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }

    /// Append the nodes of a rule lying to the right of this one.
    void append(const QuadratureRule& right);
};

/// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

/// n-point Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1].
QuadratureRule gauss_jacobi(int n, double a, double b);

/// n-point rule for the weight (x-lo)^beta on [lo, hi]; the weight is folded into the weights.
QuadratureRule gauss_jacobi_left(int n, double beta, double lo, double hi);

/// Composite Gauss-Legendre rule on [lo, hi) with n_panels uniform panels.
QuadratureRule composite_legendre(int n_panels, int order, double lo, double hi);

/// Rule for [x0, inf) through x = x0 + L*y/(1-y), composite Gauss-Legendre in y with
/// panels that halve their width towards y = 1.
QuadratureRule semi_infinite(int n_panels, int order, double x0, double L);

double gamma_fn(double z);
double log_gamma(double z);

double bessel_J(double alpha, double z);
double bessel_I(double alpha, double z);
double bessel_K(double alpha, double z);
double bessel_J_prime(double alpha, double z);
double bessel_I_prime(double alpha, double z);
double bessel_K_prime(double alpha, double z);

/// Principal-branch I_nu for complex argument via the power series. Intended for |z| <= 12.
std::complex<double> bessel_I(double nu, std::complex<double> z);
/// Principal-branch K_nu for complex argument, Re z >= 0, via the connection formula
/// (non-integer nu) or the logarithmic series (integer nu). Intended for |z| <= 12.
std::complex<double> bessel_K(double nu, std::complex<double> z);
std::complex<double> bessel_I_prime(double nu, std::complex<double> z);
std::complex<double> bessel_K_prime(double nu, std::complex<double> z);

/// Li_sigma(z) for real z in (-1, 0].
double polylog(double sigma, double z);

/// F_beta(s) = int_0^inf x^beta log(1 + e^{-s-x}) dx by quadrature; any real s.
double F_beta(double beta, double s);
/// Same quantity through -Gamma(beta+1) Li_{beta+2}(-e^{-s}); requires s > 0.
double F_beta_polylog(double beta, double s);

struct AsymptoticIntegral {
    double numeric = 0.0;
    double prediction = 0.0;
    double ratio() const { return numeric / prediction; }
};

/// I_t(s) = int_0^delta x^beta f(x) log(1 + e^{-s - t q(x)}) dx together with its leading
/// large-t prediction f(0) / (m q0^{(beta+1)/m}) t^{-(beta+1)/m} F_{(beta+1)/m - 1}(s),
/// where q(x) = q0 x^m (1 + O(x)).
AsymptoticIntegral laguerre_asymptotic_integral(double beta, const std::function<double(double)>& f,
                                                const Polynomial& q, double t, double s,
                                                double delta);

/// Numerically stable log(1 + e^x).
inline double log1pexp(double x) {
    if (x > 35.0) return x;
    if (x < -35.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

/// Logistic 1/(1 + e^{-x}) without overflow.
inline double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace hardedge::specfun
