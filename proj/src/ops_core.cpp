#include "hardedge/ops_core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "hardedge/errors.hpp"
#include "hardedge/format.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBig = 1e150;
const double kLogBig = std::log(kBig);

/// log of omega / x^alpha, the density of the weight against a MeasureRule.
double log_relative_weight(const ModelConfig& cfg, double x) {
    double lw = -cfg.n * cfg.V(x);
    if (!cfg.s_infinite) lw += symbols::log_sigma_n(cfg, x, cfg.s);
    return lw;
}

double log_weight_of(const ModelConfig& cfg, double x) {
    const double lw = log_relative_weight(cfg, x);
    return cfg.alpha != 0.0 ? lw + cfg.alpha * std::log(x) : lw;
}

// Orthonormal polynomials at a single point, each stored as mantissa * e^{log_scale}.
struct ScaledValues {
    std::vector<double> m, dm, log_scale;
};

// p_j(x) sqrt(omega(x)) for j = 0..n with derivatives of the polynomial factor.
ScaledValues scaled_polys(const RecurrenceTable& tab, double x) {
    const int n = tab.n();
    ScaledValues out;
    out.m.resize(n + 1);
    out.dm.resize(n + 1);
    out.log_scale.resize(n + 1);
    double ls = -0.5 * tab.log_mu0 + 0.5 * tab.log_weight(x);
    double pm = 0.0, p = 1.0, dpm = 0.0, dp = 0.0;
    for (int j = 0; j <= n; ++j) {
        out.m[j] = p;
        out.dm[j] = dp;
        out.log_scale[j] = ls;
        if (j == n) break;
        const double pn = ((x - tab.a[j]) * p - tab.b[j] * pm) / tab.b[j + 1];
        const double dpn = (p + (x - tab.a[j]) * dp - tab.b[j] * dpm) / tab.b[j + 1];
        pm = p;
        p = pn;
        dpm = dp;
        dp = dpn;
        const double mag = std::max({std::abs(p), std::abs(pm), std::abs(dp), std::abs(dpm)});
        if (mag > kBig) {
            p /= kBig;
            pm /= kBig;
            dp /= kBig;
            dpm /= kBig;
            ls += kLogBig;
        }
    }
    return out;
}

// Stieltjes sweep over the discrete measure exp(log_lambda_i) at nodes x_i. Per-node
// scale factors keep p_j(x_i) sqrt(lambda_i) representable when lambda spans e^{-1000}.
template <class T>
void stieltjes(const std::vector<double>& x, const std::vector<double>& log_lambda, int n,
               RecurrenceTable& tab, bool keep_basis) {
    const std::size_t N = x.size();
    double shift = -std::numeric_limits<double>::infinity();
    for (double v : log_lambda) shift = std::max(shift, v);
    T mass = 0;
    for (std::size_t i = 0; i < N; ++i) mass += std::exp(static_cast<T>(log_lambda[i] - shift));
    tab.log_mu0 = shift + static_cast<double>(std::log(mass));

    std::vector<double> scale_log(N), factor(N), cur(N, 1.0), prev(N, 0.0), q(N);
    for (std::size_t i = 0; i < N; ++i) {
        scale_log[i] = 0.5 * (log_lambda[i] - tab.log_mu0);
        factor[i] = std::exp(scale_log[i]);
    }
    tab.a.assign(n, 0.0);
    tab.b.assign(n + 1, 0.0);
    tab.diag_kernel.assign(N, 0.0);
    if (keep_basis) tab.basis.resize(N, n);

    for (int j = 0; j < n; ++j) {
        T num = 0;
        for (std::size_t i = 0; i < N; ++i) {
            q[i] = cur[i] * factor[i];
            const T qi = q[i];
            num += static_cast<T>(x[i]) * qi * qi;
        }
        for (std::size_t i = 0; i < N; ++i) tab.diag_kernel[i] += q[i] * q[i];
        if (keep_basis)
            for (std::size_t i = 0; i < N; ++i) tab.basis(i, j) = q[i];
        const double aj = static_cast<double>(num);
        tab.a[j] = aj;
        T norm = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double r = (x[i] - aj) * cur[i] - tab.b[j] * prev[i];
            prev[i] = cur[i];
            cur[i] = r;
            const T ri = r * factor[i];
            norm += ri * ri;
        }
        const double bj = std::sqrt(static_cast<double>(norm));
        if (!(bj > 0.0) || !std::isfinite(bj))
            throw NumericalError(
                "precision exhausted; increase quadrature order or enable extended precision");
        tab.b[j + 1] = bj;
        for (std::size_t i = 0; i < N; ++i) {
            cur[i] /= bj;
            if (std::abs(cur[i]) > kBig || std::abs(prev[i]) > kBig) {
                cur[i] /= kBig;
                prev[i] /= kBig;
                scale_log[i] += kLogBig;
                factor[i] = std::exp(scale_log[i]);
            }
        }
    }
    tab.log_gamma.assign(n, 0.0);
    double acc = -0.5 * tab.log_mu0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) acc -= std::log(tab.b[j]);
        tab.log_gamma[j] = acc;
    }
}

// Max |<p_j, p_k> - delta_jk| over spot pairs on an independent rule.
double orthonormality_residual(const RecurrenceTable& tab, const MeasureRule& rule) {
    const int n = tab.n();
    std::vector<int> spots{0, std::min(1, n - 1), n / 2, n - 1};
    std::sort(spots.begin(), spots.end());
    spots.erase(std::unique(spots.begin(), spots.end()), spots.end());
    const std::size_t S = spots.size();
    std::vector<double> gram(S * S, 0.0);
    // scaled_polys carries the full omega; the rule weights already hold x^alpha
    std::vector<double> alpha_log(rule.x.size(), 0.0);
    if (tab.cfg.alpha != 0.0)
        for (std::size_t i = 0; i < rule.x.size(); ++i) alpha_log[i] = tab.cfg.alpha * std::log(rule.x[i]);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const ScaledValues v = scaled_polys(tab, rule.x[i]);
        std::vector<double> val(S);
        for (std::size_t k = 0; k < S; ++k) {
            const int j = spots[k];
            val[k] = v.m[j] * std::exp(v.log_scale[j] + 0.5 * (rule.log_w[i] - alpha_log[i]));
        }
        for (std::size_t k = 0; k < S; ++k)
            for (std::size_t l = 0; l < S; ++l) gram[k * S + l] += val[k] * val[l];
    }
    double res = 0.0;
    for (std::size_t k = 0; k < S; ++k)
        for (std::size_t l = 0; l < S; ++l)
            res = std::max(res, std::abs(gram[k * S + l] - (k == l ? 1.0 : 0.0)));
    return res;
}

}  // namespace

double RecurrenceTable::log_weight(double x) const { return log_weight_of(cfg, x); }

double RecurrenceTable::p(int j, double x) const {
    if (j < 0 || j > n()) throw DomainError("polynomial index out of range");
    const ScaledValues v = scaled_polys(*this, x);
    return v.m[j] * std::exp(v.log_scale[j] - 0.5 * log_weight(x));
}

std::string RecurrenceTable::to_csv() const {
    std::ostringstream os;
    os << "j,a_j,b_j,gamma_j,log_gamma_j\n";
    for (int j = 0; j < n(); ++j)
        os << j << ',' << fmt17(a[j]) << ',' << fmt17(b[j]) << ',' << fmt17(gamma(j)) << ','
           << fmt17(log_gamma[j]) << '\n';
    return os.str();
}

nlohmann::json RecurrenceTable::to_json() const {
    nlohmann::json j;
    j["config"] = hardedge::to_json(cfg);
    j["a"] = a;
    j["b"] = b;
    j["log_mu0"] = log_mu0;
    j["log_gamma"] = log_gamma;
    j["orthonormality_residual"] = orthonormality_residual;
    return j;
}

std::string KernelTable::to_csv() const {
    std::ostringstream os;
    os << "u,v," << kind << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 0; k < grid.size(); ++k)
            os << fmt17(grid[i]) << ',' << fmt17(grid[k]) << ',' << fmt17(values(i, k)) << '\n';
    return os.str();
}

nlohmann::json KernelTable::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["grid"] = grid;
    std::vector<std::vector<double>> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 0; k < grid.size(); ++k) rows[i].push_back(values(i, k));
    j["values"] = rows;
    return j;
}

namespace ops {

std::shared_ptr<const MeasureRule> make_rule(const ModelConfig& cfg, const EquilibriumData& eq,
                                             double s_design, const BuildOptions& opt) {
    cfg.validate();
    const double a = eq.a, alpha = cfg.alpha;
    const int m = cfg.m;
    const double n = cfg.n;
    const double S = std::isfinite(s_design) ? s_design : 0.0;

    // Thinning layer: exponent n^{2m} Q(a sin^2 theta) ~ (theta/theta_s)^{2m}.
    const double theta_s = 1.0 / (n * std::pow(cfg.t * std::pow(a, m), 0.5 / m));
    double pole = 1.0;
    if (S < -1.0) pole = std::min(1.0, kPi / (2.0 * m) * std::pow(-S, 0.5 / m - 1.0));
    const double h_s = 0.5 * theta_s * pole / opt.refine;
    const double theta_T = theta_s * std::pow(std::max(0.0, -S) + 60.0, 0.5 / m);

    // Bulk: at most three zeros of p_n per panel.
    double hmax = 0.0;
    for (int i = 0; i <= 200; ++i) hmax = std::max(hmax, std::abs(eq.h(a * i / 200.0)));
    const double rho = 2.0 * a / kPi * hmax;
    const double h_b = std::min(kPi / 16.0, 3.0 / (rho * n)) / opt.refine;

    std::vector<double> breaks{0.0};
    const double half_pi = 0.5 * kPi;
    while (breaks.back() < half_pi) {
        const double th = breaks.back();
        const double h = th < theta_T ? std::min(h_s, h_b) : h_b;
        double next = th + h;
        if (next > half_pi - 0.25 * h) next = half_pi;
        breaks.push_back(next);
    }

    auto rule = std::make_shared<MeasureRule>();
    rule->a = a;
    const double log_pref = std::log(2.0) + (alpha + 1.0) * std::log(a);
    const double expo = 2.0 * alpha + 1.0;
    {
        const auto gj = specfun::gauss_jacobi_left(opt.order, expo, 0.0, breaks[1]);
        for (std::size_t i = 0; i < gj.size(); ++i) {
            const double th = gj.nodes[i];
            const double s = std::sin(th);
            rule->x.push_back(a * s * s);
            rule->log_w.push_back(std::log(gj.weights[i]) + log_pref + expo * std::log(s / th) +
                                  std::log(std::cos(th)));
        }
    }
    for (std::size_t p = 1; p + 1 < breaks.size(); ++p) {
        const auto gl = specfun::gauss_legendre(opt.order, breaks[p], breaks[p + 1]);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double th = gl.nodes[i];
            const double s = std::sin(th);
            rule->x.push_back(a * s * s);
            rule->log_w.push_back(std::log(gl.weights[i]) + log_pref + expo * std::log(s) +
                                  std::log(std::cos(th)));
        }
    }

    // Tail beyond a: stop once n (ell_V - effective potential) exceeds 70.
    double X = a * (1.0 + 0.05);
    for (int k = 0; k < 200; ++k) {
        if (n * (eq.ell_V - eq.effective_potential(X)) - std::max(alpha, 0.0) * std::log(X) > 70.0) break;
        X = a + (X - a) * 1.3;
    }
    rule->x_max = X;
    const double n2m = std::pow(n, 2 * m);
    const Polynomial dQ = cfg.Q.derivative();
    double x0 = a, w = 0.5 * a * std::pow(n, -2.0 / 3.0) / opt.refine;
    while (x0 < X) {
        double width = w;
        // Resolve the thinning poles while the layer still extends past a.
        if (S + n2m * cfg.Q(x0) < 80.0)
            width = std::min(width, 0.5 * kPi / std::max(n2m * std::abs(dQ(x0)), 1e-300) / opt.refine);
        const double x1 = std::min(X, x0 + width);
        const auto gl = specfun::gauss_legendre(opt.order, x0, x1);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            rule->x.push_back(gl.nodes[i]);
            rule->log_w.push_back(std::log(gl.weights[i]) + alpha * std::log(gl.nodes[i]));
        }
        x0 = x1;
        w *= 1.25;
    }
    return rule;
}

RecurrenceTable build_recurrence(const ModelConfig& cfg, std::shared_ptr<const MeasureRule> rule,
                                 const BuildOptions& opt) {
    cfg.validate();
    if (cfg.n > kMaxN) throw DomainError("n exceeds the supported maximum of 400");
    if (rule->x.size() < 4 * static_cast<std::size_t>(cfg.n))
        throw DomainError("quadrature order must be at least 4n");
    RecurrenceTable tab;
    tab.cfg = cfg;
    tab.rule = rule;
    std::vector<double> log_lambda(rule->x.size());
    for (std::size_t i = 0; i < rule->x.size(); ++i)
        log_lambda[i] = rule->log_w[i] + log_relative_weight(cfg, rule->x[i]);
    if (opt.extended_precision)
        stieltjes<long double>(rule->x, log_lambda, cfg.n, tab, opt.keep_basis);
    else
        stieltjes<double>(rule->x, log_lambda, cfg.n, tab, opt.keep_basis);
    return tab;
}

RecurrenceTable build_recurrence(const ModelConfig& cfg, const EquilibriumData& eq,
                                 const BuildOptions& opt) {
    const double s_design = cfg.s_infinite ? 0.0 : cfg.s;
    RecurrenceTable tab = build_recurrence(cfg, make_rule(cfg, eq, s_design, opt), opt);
    if (opt.verify) {
        BuildOptions fine = opt;
        fine.refine = 1.7 * opt.refine;
        tab.orthonormality_residual = orthonormality_residual(tab, *make_rule(cfg, eq, s_design, fine));
    }
    return tab;
}

double cd_kernel(const RecurrenceTable& tab, double x, double y) {
    return correlation_kernel(tab, x, y) *
           std::exp(-0.5 * (tab.log_weight(x) + tab.log_weight(y)));
}

double correlation_kernel(const RecurrenceTable& tab, double x, double y) {
    if (x < 0.0 || y < 0.0) throw DomainError("kernel arguments must be non-negative");
    const int n = tab.n();
    const double bn = tab.b[n];
    const ScaledValues vx = scaled_polys(tab, x);
    if (x == y) {
        const double val = bn * (vx.dm[n] * vx.m[n - 1] - vx.dm[n - 1] * vx.m[n]);
        return val * std::exp(vx.log_scale[n] + vx.log_scale[n - 1]);
    }
    if (std::abs(x - y) <= 1e-3 * std::max(x, y)) return correlation_kernel_sum(tab, x, y);
    const ScaledValues vy = scaled_polys(tab, y);
    const double t1 = vx.m[n] * vy.m[n - 1] * std::exp(vx.log_scale[n] + vy.log_scale[n - 1]);
    const double t2 = vx.m[n - 1] * vy.m[n] * std::exp(vx.log_scale[n - 1] + vy.log_scale[n]);
    return bn * (t1 - t2) / (x - y);
}

double correlation_kernel_sum(const RecurrenceTable& tab, double x, double y) {
    const ScaledValues vx = scaled_polys(tab, x), vy = scaled_polys(tab, y);
    double acc = 0.0;
    for (int j = 0; j < tab.n(); ++j)
        acc += vx.m[j] * vy.m[j] * std::exp(vx.log_scale[j] + vy.log_scale[j]);
    return acc;
}

KernelTable correlation_table(const RecurrenceTable& tab, const std::vector<double>& grid) {
    KernelTable kt;
    kt.grid = grid;
    kt.kind = "correlation";
    const std::size_t G = grid.size();
    kt.values.resize(G, G);
    for (std::size_t i = 0; i < G; ++i)
        for (std::size_t k = i; k < G; ++k)
            kt.values(i, k) = kt.values(k, i) = correlation_kernel(tab, grid[i], grid[k]);
    return kt;
}

double log_statistic_gamma_route(const RecurrenceTable& deformed, const RecurrenceTable& classical) {
    if (deformed.n() != classical.n()) throw DomainError("tables must share n");
    double acc = 0.0;
    for (int j = 0; j < deformed.n(); ++j)
        acc += 2.0 * (classical.log_gamma[j] - deformed.log_gamma[j]);
    return acc;
}

double log_statistic_det_route(const RecurrenceTable& classical, double s) {
    if (classical.basis.cols() != classical.n())
        throw DomainError("determinant route needs a table built with keep_basis");
    const MeasureRule& rule = *classical.rule;
    const Eigen::Index N = classical.basis.rows();
    Eigen::VectorXd d(N);
    for (Eigen::Index i = 0; i < N; ++i)
        d(i) = symbols::one_minus_sigma_n(classical.cfg, rule.x[i], s);
    const Eigen::MatrixXd scaled = d.cwiseSqrt().asDiagonal() * classical.basis;
    Eigen::MatrixXd A = -scaled.transpose() * scaled;
    A.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw NumericalError("I - M is not positive definite");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double log_statistic_deformation_route(const ModelConfig& cfg, std::shared_ptr<const MeasureRule> rule,
                                       double s, const BuildOptions& opt) {
    BuildOptions o = opt;
    o.keep_basis = false;
    o.verify = false;
    // Composite Gauss-Legendre in u on [s, s + 42]; the tail is below n e^{-(s+42)}.
    const auto ugrid = specfun::composite_legendre(21, 10, s, s + 42.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < ugrid.size(); ++k) {
        const double u = ugrid.nodes[k];
        const RecurrenceTable tab = build_recurrence(cfg.with_s(u), rule, o);
        double f = 0.0;
        for (std::size_t i = 0; i < rule->x.size(); ++i)
            f += tab.diag_kernel[i] * symbols::one_minus_sigma_n(cfg, rule->x[i], u);
        acc += ugrid.weights[k] * f;
    }
    return -acc;
}

StatisticRoutes log_statistic_all_routes(const ModelConfig& cfg, const EquilibriumData& eq,
                                         const BuildOptions& opt) {
    if (cfg.s_infinite) return {};
    const auto rule = make_rule(cfg, eq, cfg.s, opt);
    BuildOptions o = opt;
    o.verify = false;
    o.keep_basis = false;
    const RecurrenceTable deformed = build_recurrence(cfg, rule, o);
    o.keep_basis = true;
    const RecurrenceTable classical = build_recurrence(cfg.undeformed(), rule, o);
    StatisticRoutes r;
    r.gamma = log_statistic_gamma_route(deformed, classical);
    r.det = log_statistic_det_route(classical, cfg.s);
    r.deformation = log_statistic_deformation_route(cfg, rule, cfg.s, opt);
    return r;
}

double scaled_hard_edge_kernel(const RecurrenceTable& tab, const EquilibriumData& eq, double u, double v) {
    if (!(u > 0.0) || !(v > 0.0)) throw DomainError("scaled kernel arguments must be positive");
    const double sc = eq.c_V * static_cast<double>(tab.n()) * tab.n();
    return correlation_kernel(tab, u / sc, v / sc) / sc;
}

KernelTable scaled_kernel_table(const RecurrenceTable& tab, const EquilibriumData& eq,
                                const std::vector<double>& grid) {
    KernelTable kt;
    kt.grid = grid;
    kt.kind = "finite-n scaled";
    const std::size_t G = grid.size();
    kt.values.resize(G, G);
    for (std::size_t i = 0; i < G; ++i)
        for (std::size_t k = i; k < G; ++k)
            kt.values(i, k) = kt.values(k, i) = scaled_hard_edge_kernel(tab, eq, grid[i], grid[k]);
    return kt;
}

}  // namespace ops
}  // namespace hardedge
