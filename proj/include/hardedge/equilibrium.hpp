#pragma once

#include <json.hpp>

#include "hardedge/polynomial.hpp"
#include "hardedge/symbols.hpp"

namespace hardedge {

/// One-cut equilibrium measure of [0, inf) in the external field V, supported on [0, a] with
/// density (1/pi) sqrt((a-x)/x) |h(x)|.
struct EquilibriumData {
    Polynomial V;
    double a = 0.0;
    Polynomial h;
    double kappa0 = 0.0;  ///< lim sqrt(x) mu'(x) as x -> 0+
    double c_V = 0.0;     ///< pi^2 kappa0^2
    double ell_V = 0.0;   ///< Euler-Lagrange constant

    double density(double x) const;
    /// int_0^a log|x - y| dmu(y).
    double log_potential(double x) const;
    /// 2 int log|x - y| dmu(y) - V(x); equals ell_V on [0, a].
    double effective_potential(double x) const;
    /// phi(z) = int_0^z (C^mu(s) + V'(s)/2) ds for real z < 0 or z >= a.
    double phi(double z) const;
    /// psi(z) = phi(z)^2 / 4.
    double psi(double z) const;
};

nlohmann::json to_json(const EquilibriumData& eq);

/// Residuals of the defining properties, as measured by check_equilibrium.
struct EquilibriumReport {
    double mass_defect = 0.0;          ///< |int mu' - 1|
    double euler_lagrange_sup = 0.0;   ///< sup |effective potential - ell_V| on [delta, a - delta]
    double outside_margin = 0.0;       ///< min over x in (a, 3a] of ell_V - effective potential (must be > 0)
    double min_interior_density = 0.0; ///< min of mu' on (delta, a - delta)
    double kappa0_closed_form = 0.0;   ///< sqrt(a) h(0) / pi
    double psi_limit_defect = 0.0;     ///< |psi(z)/(-z) - c_V| at z = -1e-9
    bool passed(double tol_mass = 1e-10, double tol_el = 1e-7) const;
};

namespace equilibrium {

EquilibriumData solve_equilibrium(const Polynomial& V);
EquilibriumReport check_equilibrium(const EquilibriumData& eq);

ThinningScale thinning_scale(const EquilibriumData& eq, double t, int m);

/// p0 = -(1/2 pi) int_0^a log sigma_n(x) / sqrt(x (a - x)) dx.
double p0_global_parametrix(const ModelConfig& cfg, const EquilibriumData& eq);
/// Large-n limit of n p0: a^{-1/2} t^{-1/(2m)} / (2 pi m) F_{1/(2m)-1}(s).
double p_infinity(const ModelConfig& cfg, const EquilibriumData& eq);

}  // namespace equilibrium
}  // namespace hardedge
