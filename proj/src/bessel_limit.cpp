#include "hardedge/bessel_limit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "hardedge/errors.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge::bessel {

namespace {

constexpr double kPi = std::numbers::pi;

double entire_diag(double alpha, double w) {
    const double j0 = entire_j(alpha, w), j1 = entire_j(alpha + 1.0, w), j2 = entire_j(alpha + 2.0, w);
    return 0.5 * (j0 * j1 - 0.5 * w * j0 * j2 + 0.5 * w * j1 * j1);
}

// E(w, w') from precomputed j_alpha, j_{alpha+1} values.
double entire_offdiag(double w, double ja_w, double ja1_w, double v, double ja_v, double ja1_v) {
    return (w * ja1_w * ja_v - v * ja_w * ja1_v) / (2.0 * (w - v));
}

bool near(double w, double v) { return std::abs(w - v) <= 1e-7 * std::max(1.0, std::max(w, v)); }

// Distance from the poles of tau(r) = 1/(1 + e^{-s - r^m}) to the segment [0, R].
double pole_distance(double s, int m, double R) {
    double dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 6; ++k) {
        for (double sign : {1.0, -1.0}) {
            const std::complex<double> target(-s, sign * kPi * (2 * k + 1));
            const double mod = std::pow(std::abs(target), 1.0 / m);
            const double arg = std::arg(target);
            for (int b = 0; b < m; ++b) {
                const std::complex<double> root = std::polar(mod, (arg + 2.0 * kPi * b) / m);
                const double re = std::clamp(root.real(), 0.0, R);
                dist = std::min(dist, std::abs(root - std::complex<double>(re, 0.0)));
            }
        }
    }
    return dist;
}

}  // namespace

double entire_j(double nu, double w) {
    if (w < 0.0) throw DomainError("entire_j requires w >= 0");
    if (w <= 16.0) {
        const double q = -0.25 * w;
        double term = 1.0 / specfun::gamma_fn(nu + 1.0);
        double sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= q / (k * (nu + k));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) && k > 4) break;
        }
        return sum * std::pow(2.0, -nu);
    }
    return specfun::bessel_J(nu, std::sqrt(w)) * std::pow(w, -0.5 * nu);
}

double bessel_kernel_entire(double alpha, double u, double v) {
    if (near(u, v)) return entire_diag(alpha, 0.5 * (u + v));
    return entire_offdiag(u, entire_j(alpha, u), entire_j(alpha + 1.0, u), v, entire_j(alpha, v),
                          entire_j(alpha + 1.0, v));
}

double bessel_kernel(double alpha, double u, double v) {
    if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
    if (!(u > 0.0) || !(v > 0.0)) throw DomainError("Bessel kernel arguments must be positive");
    return std::pow(u * v, 0.5 * alpha) * bessel_kernel_entire(alpha, u, v);
}

double classical_limit_kernel(double alpha, double u, double v) {
    return 4.0 * bessel_kernel(alpha, 4.0 * u, 4.0 * v);
}

ThinningScale scale_from_x(double x_param, int m) {
    ThinningScale sc;
    sc.x_param = x_param;
    sc.u_param = std::pow(2.0 / x_param, 2 * m);
    sc.c_V = 1.0;
    return sc;
}

namespace {

DiscreteOperator assemble(double alpha, double x_param, int m, double s, bool infinite,
                          const OperatorOptions& opt) {
    if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
    if (!(x_param > 0.0)) throw DomainError("x must be positive");
    DiscreteOperator op;
    op.alpha = alpha;
    op.x_param = x_param;
    op.m = m;
    op.s = s;
    op.s_infinite = infinite;
    const double x2 = x_param * x_param;
    // In r = w/x^2 the symbol is 1/(1 + e^{-s - r^m}); beyond R its defect is below e^{-40}.
    const double S = infinite ? 0.0 : s;
    const double R = std::pow(40.0 + std::max(0.0, -S), 1.0 / m) * opt.widen;
    const double h = std::clamp(0.8 * pole_distance(S, m, R), 0.05, 2.0) / opt.refine;
    const int panels = std::max(2, static_cast<int>(std::ceil(R / h)));
    const double hw = x2 * R / panels;

    const auto first = specfun::gauss_jacobi_left(opt.order, alpha, 0.0, hw);
    for (std::size_t i = 0; i < first.size(); ++i) {
        op.nodes.push_back(first.nodes[i]);
        op.weights.push_back(first.weights[i]);
    }
    for (int p = 1; p < panels; ++p) {
        const auto gl = specfun::gauss_legendre(opt.order, p * hw, (p + 1) * hw);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            op.nodes.push_back(gl.nodes[i]);
            op.weights.push_back(gl.weights[i] * std::pow(gl.nodes[i], alpha));
        }
    }
    const std::size_t N = op.nodes.size();
    std::vector<double> ja(N), ja1(N);
    for (std::size_t i = 0; i < N; ++i) {
        ja[i] = entire_j(alpha, op.nodes[i]);
        ja1[i] = entire_j(alpha + 1.0, op.nodes[i]);
        op.symbol.push_back(infinite ? 1.0
                                     : specfun::logistic(s + std::pow(op.nodes[i] / x2, m)));
    }
    op.kernel.resize(N, N);
    op.matrix.resize(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = i; k < N; ++k) {
            const double e = (i == k) ? entire_diag(alpha, op.nodes[i])
                                      : entire_offdiag(op.nodes[i], ja[i], ja1[i], op.nodes[k], ja[k], ja1[k]);
            op.kernel(i, k) = op.kernel(k, i) = std::sqrt(op.weights[i] * op.weights[k]) * e;
        }
    }
    Eigen::VectorXd d(N);
    for (std::size_t i = 0; i < N; ++i)
        d(i) = infinite ? 0.0 : std::sqrt(specfun::logistic(-(s + std::pow(op.nodes[i] / x2, m))));
    op.matrix = d.asDiagonal() * op.kernel * d.asDiagonal();
    return op;
}

}  // namespace

DiscreteOperator build_operator(double alpha, const ThinningScale& scale, int m, double s,
                                const OperatorOptions& opt) {
    return assemble(alpha, scale.x_param, m, s, false, opt);
}

DiscreteOperator build_operator_infinite(double alpha, const ThinningScale& scale, int m,
                                         const OperatorOptions& opt) {
    return assemble(alpha, scale.x_param, m, 0.0, true, opt);
}

double log_fredholm_det(const DiscreteOperator& op) {
    const Eigen::Index N = op.matrix.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N) - op.matrix;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericalError("symbol too aggressive; shrink domain or raise s");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double fredholm_det(const DiscreteOperator& op) { return std::exp(log_fredholm_det(op)); }

ThinnedKernel::ThinnedKernel(DiscreteOperator op) : op_(std::move(op)) {
    const std::size_t N = op_.nodes.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N) - op_.matrix;
    llt_.compute(A);
    if (llt_.info() != Eigen::Success)
        throw NumericalError("symbol too aggressive; shrink domain or raise s");
    ja_.resize(N);
    ja1_.resize(N);
    scale_.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        ja_[i] = entire_j(op_.alpha, op_.nodes[i]);
        ja1_[i] = entire_j(op_.alpha + 1.0, op_.nodes[i]);
        const double defect = op_.s_infinite ? 0.0 : 1.0 - op_.symbol[i];
        scale_(i) = std::sqrt(defect * op_.weights[i]);
    }
}

Eigen::VectorXd ThinnedKernel::projection(double w) const {
    const std::size_t N = op_.nodes.size();
    const double jw = entire_j(op_.alpha, w), jw1 = entire_j(op_.alpha + 1.0, w);
    Eigen::VectorXd col(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double e = near(op_.nodes[i], w)
                             ? entire_diag(op_.alpha, 0.5 * (op_.nodes[i] + w))
                             : entire_offdiag(op_.nodes[i], ja_[i], ja1_[i], w, jw, jw1);
        col(i) = scale_(i) * e;
    }
    return llt_.matrixL().solve(col);
}

double ThinnedKernel::in_bessel_variable(double w1, double w2) const {
    if (!(w1 > 0.0) || !(w2 > 0.0)) throw DomainError("kernel arguments must be positive");
    const double x2 = op_.x_param * op_.x_param;
    const auto tau = [&](double w) {
        return op_.s_infinite ? 1.0 : specfun::logistic(op_.s + std::pow(w / x2, op_.m));
    };
    double r = bessel_kernel_entire(op_.alpha, w1, w2);
    if (!op_.s_infinite) r += projection(w1).dot(projection(w2));
    return std::sqrt(tau(w1) * tau(w2)) * std::pow(w1 * w2, 0.5 * op_.alpha) * r;
}

double ThinnedKernel::operator()(double u, double v) const { return 4.0 * in_bessel_variable(4.0 * u, 4.0 * v); }

KernelTable conditional_thinned_kernel(double alpha, const ThinningScale& scale, int m, double s,
                                       const std::vector<double>& grid, const OperatorOptions& opt) {
    const ThinnedKernel K(build_operator(alpha, scale, m, s, opt));
    KernelTable kt;
    kt.grid = grid;
    kt.kind = "conditional-thinned";
    const std::size_t G = grid.size();
    kt.values.resize(G, G);
    for (std::size_t i = 0; i < G; ++i)
        for (std::size_t k = i; k < G; ++k) kt.values(i, k) = kt.values(k, i) = K(grid[i], grid[k]);
    return kt;
}

KernelTable classical_limit_table(double alpha, const std::vector<double>& grid) {
    KernelTable kt;
    kt.grid = grid;
    kt.kind = "bessel";
    const std::size_t G = grid.size();
    kt.values.resize(G, G);
    for (std::size_t i = 0; i < G; ++i)
        for (std::size_t k = i; k < G; ++k)
            kt.values(i, k) = kt.values(k, i) = classical_limit_kernel(alpha, grid[i], grid[k]);
    return kt;
}

double log_statistic_fredholm(double alpha, const ThinningScale& scale, int m, double s,
                              const OperatorOptions& opt) {
    return log_fredholm_det(build_operator(alpha, scale, m, s, opt));
}

double log_statistic_trace(double alpha, const ThinningScale& scale, int m, double s,
                           const OperatorOptions& opt) {
    // d/du log det(I - A_u) = tr(tau_u A_u (I - A_u)^{-1}) = sum_i tau_i [(I - A_u)^{-1} - I]_ii.
    const DiscreteOperator base = build_operator(alpha, scale, m, s, opt);
    const std::size_t N = base.nodes.size();
    const double x2 = scale.x_param * scale.x_param;
    std::vector<double> r(N);
    for (std::size_t i = 0; i < N; ++i) r[i] = std::pow(base.nodes[i] / x2, m);
    const auto ugrid = specfun::composite_legendre(21, 10, s, s + 42.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < ugrid.size(); ++k) {
        const double u = ugrid.nodes[k];
        Eigen::VectorXd d(N);
        for (std::size_t i = 0; i < N; ++i) d(i) = std::sqrt(specfun::logistic(-(u + r[i])));
        Eigen::MatrixXd A = -(d.asDiagonal() * base.kernel * d.asDiagonal());
        A.diagonal().array() += 1.0;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success)
            throw NumericalError("symbol too aggressive; shrink domain or raise s");
        const Eigen::MatrixXd Linv =
            llt.matrixL().solve(Eigen::MatrixXd::Identity(N, N));
        double tr = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double inv_ii = Linv.col(i).squaredNorm();
            tr += specfun::logistic(u + r[i]) * (inv_ii - 1.0);
        }
        acc += ugrid.weights[k] * tr;
    }
    return -acc;
}

}  // namespace hardedge::bessel
