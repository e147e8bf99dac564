#pragma once

#include <json.hpp>

#include "hardedge/polynomial.hpp"

namespace hardedge {

/// Finite-n ensemble: weight sigma_n(x|s) x^alpha e^{-nV(x)} on [0, inf) with
/// sigma_n(x|s) = 1/(1 + e^{-s - n^{2m} Q(x)}) and Q(x) = t x^m (1 + O(x)).
struct ModelConfig {
    double alpha = 0.0;
    Polynomial V{{0.0, 1.0}};
    Polynomial Q{{0.0, 1.0}};
    int m = 1;
    double t = 1.0;
    double s = 0.0;
    bool s_infinite = false;  ///< classical (undeformed) ensemble when set
    int n = 1;

    /// Throws DomainError naming the first violated invariant.
    void validate() const;

    /// Copy with a different deformation parameter.
    ModelConfig with_s(double s_new) const;
    ModelConfig undeformed() const;
    ModelConfig with_n(int n_new) const;
};

nlohmann::json to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Hard-edge scaling constants: x_param = (4 c_V / t^{1/m})^{1/2}, u_param = (2/x_param)^{2m}.
struct ThinningScale {
    double x_param = 1.0;
    double u_param = 1.0;
    double c_V = 1.0;
};

namespace symbols {

/// sigma_n(x | cfg.s); identically 1 for the classical ensemble.
double sigma_n(const ModelConfig& cfg, double x);
/// sigma_n(x | s) at an explicit deformation parameter.
double sigma_n(const ModelConfig& cfg, double x, double s);
/// log sigma_n(x | s), accurate when sigma_n is close to 0 or 1.
double log_sigma_n(const ModelConfig& cfg, double x, double s);
/// 1 - sigma_n(x | s) without cancellation.
double one_minus_sigma_n(const ModelConfig& cfg, double x, double s);

/// sigma_Phi(zeta | s) = 1/(1 + e^{-s - (-1)^m zeta^m}).
double sigma_phi(double zeta, double s, int m);
double d_ds_sigma_phi(double zeta, double s, int m);
double d_ds_log_sigma_phi(double zeta, double s, int m);

/// The symbol u -> sigma_Phi(-4u/x_param^2 | s) written as 1/(1 + e^{-s - u_param u^m}).
double bessel_point_symbol(const ThinningScale& scale, int m, double u, double s);

}  // namespace symbols
}  // namespace hardedge
