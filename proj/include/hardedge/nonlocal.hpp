#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

namespace hardedge {

/// Chebyshev representation of log L(s, x) on [x_min, x_max] and the potential p derived from it.
struct PotentialProfile {
    double alpha = 0.0;
    int m = 1;
    double s = 0.0;
    double x_min = 0.0, x_max = 0.0;
    std::vector<double> x_grid;  ///< Chebyshev-Lobatto nodes, ascending
    std::vector<double> logL;
    std::vector<double> p;
    std::vector<double> dp;      ///< d p / dx
    std::vector<double> q;       ///< (p^2 - dp)/2
    double doubling_change = 0.0;  ///< sup |p_N - p_2N| over the interior two-thirds

    double logL_at(double x) const;
    double p_at(double x) const;
    double dp_at(double x) const;
    /// Columns x, logL, p, q, expansion_prediction, rel_err.
    std::string to_csv() const;
    nlohmann::json to_json() const;

    std::vector<double> coeffs;  ///< Chebyshev coefficients of log L on [x_min, x_max]
};

struct ExpansionCheck {
    double numeric = 0.0;    ///< p + (4 alpha^2 - 1)/(8x)
    double predicted = 0.0;  ///< leading small-x correction
    double rel_err = 0.0;
};

namespace nonlocal {

struct ProfileOptions {
    int intervals = 32;        ///< Lobatto nodes = intervals + 1
    double tolerance = 1e-6;   ///< node-doubling tolerance on p
    bool check_doubling = true;
};

PotentialProfile extract_p(double alpha, int m, double s, double x_min, double x_max,
                           const ProfileOptions& opt = {});

/// int_0^inf v^alpha e^{-s-v^m} / (1 + e^{-s-v^m}) dv.
double thinning_moment(double alpha, int m, double s);
/// (1/2pi) * thinning_moment.
double lambda0(double alpha, int m, double s);
/// Coefficient c with p + (4 alpha^2 - 1)/(8x) ~ c x^{2 alpha + 1}.
double correction_coefficient(double alpha, int m, double s);

double expansion_prediction(double alpha, int m, double s, double x);
ExpansionCheck small_x_expansion_check(double alpha, int m, double s, double x);
ExpansionCheck expansion_check(const PotentialProfile& prof, double x);

/// Leading small-x form sqrt(pi x) I_alpha(x sqrt(zeta)); for zeta < 0 the + boundary value.
std::complex<double> phi_small_x(double alpha, double zeta, double x);

/// Relative residual of f'' = (zeta + (4 alpha^2 - 1)/(4x^2)) f for f = x^{1/2} I_alpha(x zeta^{1/2}).
double bessel_ode_residual(double alpha, double zeta, double x);
/// Relative residual of Phi'' = (zeta + 2 dp/dx) Phi with the numeric p.
double schroedinger_residual(double alpha, double zeta, double s, double x);

}  // namespace nonlocal
}  // namespace hardedge
