#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

#include "hardedge/equilibrium.hpp"
#include "hardedge/symbols.hpp"

namespace hardedge {

/// Discretization of x^alpha dx on [0, X]: sum_i w_i f(x_i) ~ int f(x) x^alpha dx.
/// The nodes are graded for the thinning layer near 0, the bulk [0, a] and the tail.
struct MeasureRule {
    std::vector<double> x;
    std::vector<double> log_w;
    double a = 0.0;
    double x_max = 0.0;
};

/// Three-term recurrence x p_j = b_{j+1} p_{j+1} + a_j p_j + b_j p_{j-1} of the orthonormal
/// polynomials of sigma_n(x|s) x^alpha e^{-nV(x)}, with norming constants gamma_j (the
/// leading coefficients of p_j).
struct RecurrenceTable {
    ModelConfig cfg;
    std::vector<double> a;          ///< a_0 .. a_{n-1}
    std::vector<double> b;          ///< b_0 = 0, b_1 .. b_n
    double log_mu0 = 0.0;           ///< log of the total mass
    std::vector<double> log_gamma;  ///< log gamma_j, j < n
    double orthonormality_residual = 0.0;

    std::shared_ptr<const MeasureRule> rule;
    Eigen::MatrixXd basis;            ///< p_j(x_i) sqrt(w_i omega(x_i)), N x n (optional)
    std::vector<double> diag_kernel;  ///< sum_j p_j(x_i)^2 w_i omega(x_i) at the rule nodes

    int n() const { return static_cast<int>(a.size()); }
    double gamma(int j) const { return std::exp(log_gamma.at(j)); }

    /// log omega(x) for this table's weight.
    double log_weight(double x) const;
    /// Orthonormal p_j(x) for j <= n (may overflow for large n; prefer the kernels).
    double p(int j, double x) const;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Evaluated kernel on a grid.
struct KernelTable {
    std::vector<double> grid;
    Eigen::MatrixXd values;
    std::string kind;  ///< "cd", "correlation", "finite-n scaled", "bessel", "conditional-thinned"

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

namespace ops {

inline constexpr int kMaxN = 400;

struct BuildOptions {
    int order = 20;                  ///< Gauss-Legendre nodes per panel
    double refine = 1.0;             ///< panel-width divisor
    bool keep_basis = false;
    bool verify = true;              ///< orthonormality residual on an independent finer rule
    bool extended_precision = false; ///< long double accumulation in the Stieltjes sweep
};

/// Rule adapted to cfg (n, V, alpha, Q) and to thinning parameters s >= s_design.
std::shared_ptr<const MeasureRule> make_rule(const ModelConfig& cfg, const EquilibriumData& eq,
                                             double s_design, const BuildOptions& opt = {});

RecurrenceTable build_recurrence(const ModelConfig& cfg, const EquilibriumData& eq,
                                 const BuildOptions& opt = {});
/// Same weight discretized on an existing rule.
RecurrenceTable build_recurrence(const ModelConfig& cfg, std::shared_ptr<const MeasureRule> rule,
                                 const BuildOptions& opt = {});

/// K_n(x, y) = sum_{j<n} p_j(x) p_j(y) by Christoffel-Darboux (confluent on the diagonal).
double cd_kernel(const RecurrenceTable& tab, double x, double y);
/// hat K_n(x, y) = sqrt(omega(x) omega(y)) K_n(x, y), evaluated in log-space.
double correlation_kernel(const RecurrenceTable& tab, double x, double y);
/// Direct sum of sqrt(omega(x) omega(y)) p_j(x) p_j(y) (no Christoffel-Darboux).
double correlation_kernel_sum(const RecurrenceTable& tab, double x, double y);

KernelTable correlation_table(const RecurrenceTable& tab, const std::vector<double>& grid);

/// log L_n via prod_j (gamma_j(inf) / gamma_j(s))^2.
double log_statistic_gamma_route(const RecurrenceTable& deformed, const RecurrenceTable& classical);
/// log L_n via log det(I - M), M_jk = int p_j p_k (1 - sigma_n) x^alpha e^{-nV}.
double log_statistic_det_route(const RecurrenceTable& classical, double s);
/// log L_n via -int_s^inf int K_n(x, x | u) d_u omega_n(x | u) dx du.
double log_statistic_deformation_route(const ModelConfig& cfg, std::shared_ptr<const MeasureRule> rule,
                                       double s, const BuildOptions& opt = {});

struct StatisticRoutes {
    double gamma = 0.0;
    double det = 0.0;
    double deformation = 0.0;
};
/// All three routes for cfg (cfg.s finite), sharing one rule.
StatisticRoutes log_statistic_all_routes(const ModelConfig& cfg, const EquilibriumData& eq,
                                         const BuildOptions& opt = {});

/// (1/(n^2 c_V)) hat K_n(u/(c_V n^2), v/(c_V n^2)).
double scaled_hard_edge_kernel(const RecurrenceTable& tab, const EquilibriumData& eq, double u, double v);
KernelTable scaled_kernel_table(const RecurrenceTable& tab, const EquilibriumData& eq,
                                const std::vector<double>& grid);

}  // namespace ops
}  // namespace hardedge
