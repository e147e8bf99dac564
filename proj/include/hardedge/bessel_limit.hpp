#pragma once

#include <Eigen/Dense>

#include <vector>

#include "hardedge/ops_core.hpp"
#include "hardedge/symbols.hpp"

namespace hardedge {

/// Nystrom discretization of the Bessel kernel on (0, W) in the Bessel variable w, with the
/// thinning symbol tau(w) = 1/(1 + e^{-s - (w/x^2)^m}).
struct DiscreteOperator {
    double alpha = 0.0;
    double x_param = 1.0;
    int m = 1;
    double s = 0.0;
    bool s_infinite = false;
    std::vector<double> nodes;    ///< w_i
    std::vector<double> weights;  ///< mu_i, including the factor w^alpha
    std::vector<double> symbol;   ///< tau(w_i)
    Eigen::MatrixXd kernel;       ///< sqrt(mu_i) E(w_i, w_j) sqrt(mu_j), E = (ww')^{-alpha/2} J_alpha
    Eigen::MatrixXd matrix;       ///< sqrt(1 - tau_i) kernel_ij sqrt(1 - tau_j)
};

namespace bessel {

/// j_nu(w) = J_nu(sqrt w) w^{-nu/2}, an entire function of w.
double entire_j(double nu, double w);

/// J_alpha(u, v) with the confluent form on the diagonal.
double bessel_kernel(double alpha, double u, double v);
/// The entire part (uv)^{-alpha/2} J_alpha(u, v).
double bessel_kernel_entire(double alpha, double u, double v);
/// Classical large-s limit of the conditional kernel in the hard-edge variables: 4 J_alpha(4u, 4v).
double classical_limit_kernel(double alpha, double u, double v);

struct OperatorOptions {
    int order = 14;         ///< nodes per panel
    double refine = 1.0;    ///< panel-width divisor
    double widen = 1.0;     ///< multiplies the truncation point W
};

DiscreteOperator build_operator(double alpha, const ThinningScale& scale, int m, double s,
                                const OperatorOptions& opt = {});
DiscreteOperator build_operator_infinite(double alpha, const ThinningScale& scale, int m,
                                         const OperatorOptions& opt = {});

/// log det(I - matrix) by Cholesky.
double log_fredholm_det(const DiscreteOperator& op);
double fredholm_det(const DiscreteOperator& op);

/// Conditional thinned kernel sqrt(tau) J (I - (1 - tau) J)^{-1} sqrt(tau), evaluated
/// anywhere through the Nystrom interpolant.
class ThinnedKernel {
public:
    explicit ThinnedKernel(DiscreteOperator op);
    /// Kernel in the hard-edge variables u, v (w = 4u).
    double operator()(double u, double v) const;
    /// Kernel in the Bessel variable w.
    double in_bessel_variable(double w1, double w2) const;
    const DiscreteOperator& op() const { return op_; }

private:
    Eigen::VectorXd projection(double w) const;
    DiscreteOperator op_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    std::vector<double> ja_, ja1_;  // j_alpha, j_{alpha+1} at nodes
    Eigen::VectorXd scale_;         // sqrt((1 - tau_i) mu_i)
};

KernelTable conditional_thinned_kernel(double alpha, const ThinningScale& scale, int m, double s,
                                       const std::vector<double>& grid, const OperatorOptions& opt = {});
KernelTable classical_limit_table(double alpha, const std::vector<double>& grid);

/// log L_alpha^(Bes)(s, x) as log det(I - (1 - tau) J).
double log_statistic_fredholm(double alpha, const ThinningScale& scale, int m, double s,
                              const OperatorOptions& opt = {});
/// log L_alpha^(Bes)(s, x) as -int_s^inf tr[(1 - tau_u) K_alpha(.|u)] du.
double log_statistic_trace(double alpha, const ThinningScale& scale, int m, double s,
                           const OperatorOptions& opt = {});

/// Scale with the given x_param (u_param = (2/x)^{2m}, c_V = 1).
ThinningScale scale_from_x(double x_param, int m);

}  // namespace bessel
}  // namespace hardedge
