#include "hardedge/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hardedge/bessel_limit.hpp"
#include "hardedge/errors.hpp"
#include "hardedge/format.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge {

namespace {

constexpr double kPi = std::numbers::pi;

// Clenshaw evaluation of sum_j c_j T_j(t).
double clenshaw(const std::vector<double>& c, double t) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

std::vector<double> cheb_derivative(const std::vector<double>& c, double half) {
    const std::size_t N = c.size() - 1;
    std::vector<double> d(N + 2, 0.0);
    for (std::size_t j = N; j >= 1; --j) d[j - 1] = d[j + 1] + 2.0 * j * c[j];
    d[0] *= 0.5;
    d.resize(std::max<std::size_t>(N, 1));
    for (double& v : d) v /= half;
    return d;
}

// Coefficients from values at t_k = cos(pi k / N), k = 0..N.
std::vector<double> cheb_coeffs(const std::vector<double>& f) {
    const std::size_t N = f.size() - 1;
    std::vector<double> c(N + 1, 0.0);
    for (std::size_t j = 0; j <= N; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= N; ++k) {
            const double w = (k == 0 || k == N) ? 0.5 : 1.0;
            acc += w * f[k] * std::cos(kPi * double(j * k) / double(N));
        }
        c[j] = 2.0 * acc / N;
    }
    c[0] *= 0.5;
    c[N] *= 0.5;
    return c;
}

double to_t(const PotentialProfile& p, double x) {
    return (2.0 * x - (p.x_max + p.x_min)) / (p.x_max - p.x_min);
}

struct RawProfile {
    std::vector<double> x, logL, coeffs;
};

RawProfile sample(double alpha, int m, double s, double lo, double hi, int N) {
    RawProfile r;
    std::vector<double> f(N + 1);
    std::vector<double> xs(N + 1);
    for (int k = 0; k <= N; ++k) {
        xs[k] = 0.5 * (hi + lo) + 0.5 * (hi - lo) * std::cos(kPi * k / N);
        f[k] = bessel::log_statistic_fredholm(alpha, bessel::scale_from_x(xs[k], m), m, s);
    }
    r.coeffs = cheb_coeffs(f);
    r.x.assign(xs.rbegin(), xs.rend());
    r.logL.assign(f.rbegin(), f.rend());
    return r;
}

double singular_term(double alpha, double x) { return (4.0 * alpha * alpha - 1.0) / (8.0 * x); }

}  // namespace

double PotentialProfile::logL_at(double x) const { return clenshaw(coeffs, to_t(*this, x)); }

double PotentialProfile::p_at(double x) const {
    const auto d = cheb_derivative(coeffs, 0.5 * (x_max - x_min));
    return -clenshaw(d, to_t(*this, x)) - singular_term(alpha, x);
}

double PotentialProfile::dp_at(double x) const {
    const double half = 0.5 * (x_max - x_min);
    const auto d2 = cheb_derivative(cheb_derivative(coeffs, half), half);
    return -clenshaw(d2, to_t(*this, x)) + (4.0 * alpha * alpha - 1.0) / (8.0 * x * x);
}

std::string PotentialProfile::to_csv() const {
    std::ostringstream os;
    os << "x,logL,p,q,expansion_prediction,rel_err\n";
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const auto chk = nonlocal::expansion_check(*this, x_grid[i]);
        os << fmt17(x_grid[i]) << ',' << fmt17(logL[i]) << ',' << fmt17(p[i]) << ',' << fmt17(q[i]) << ','
           << fmt17(chk.predicted) << ',' << fmt17(chk.rel_err) << '\n';
    }
    return os.str();
}

nlohmann::json PotentialProfile::to_json() const {
    return {{"alpha", alpha}, {"m", m}, {"s", s}, {"x", x_grid}, {"logL", logL}, {"p", p}, {"q", q},
            {"doubling_change", doubling_change}};
}

namespace nonlocal {

PotentialProfile extract_p(double alpha, int m, double s, double x_min, double x_max,
                           const ProfileOptions& opt) {
    if (!(x_min > 0.0) || !(x_max > x_min)) throw DomainError("x grid must satisfy 0 < x_min < x_max");
    if (opt.intervals < 4) throw DomainError("at least 5 Chebyshev nodes required");
    PotentialProfile prof;
    prof.alpha = alpha;
    prof.m = m;
    prof.s = s;
    prof.x_min = x_min;
    prof.x_max = x_max;
    const RawProfile raw = sample(alpha, m, s, x_min, x_max, opt.intervals);
    prof.x_grid = raw.x;
    prof.logL = raw.logL;
    prof.coeffs = raw.coeffs;
    for (double x : prof.x_grid) {
        const double p = prof.p_at(x), dp = prof.dp_at(x);
        prof.p.push_back(p);
        prof.dp.push_back(dp);
        prof.q.push_back(0.5 * (p * p - dp));
    }
    if (opt.check_doubling) {
        PotentialProfile fine = prof;
        fine.coeffs = sample(alpha, m, s, x_min, x_max, 2 * opt.intervals).coeffs;
        const double third = (x_max - x_min) / 6.0;
        double change = 0.0;
        for (std::size_t i = 0; i < prof.x_grid.size(); ++i) {
            const double x = prof.x_grid[i];
            if (x < x_min + third || x > x_max - third) continue;
            change = std::max(change, std::abs(fine.p_at(x) - prof.p[i]));
        }
        prof.doubling_change = change;
        if (change > opt.tolerance) {
            std::ostringstream os;
            os << "spectral differentiation disagrees across resolutions: |p_N - p_2N| = " << change;
            throw NumericalError(os.str());
        }
    }
    return prof;
}

double thinning_moment(double alpha, int m, double s) {
    if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
    // v = y^{1/m}: (1/m) int_0^inf y^{(alpha+1)/m - 1} logistic(-s - y) dy.
    const double beta = (alpha + 1.0) / m - 1.0;
    const double y0 = std::max(1.0, -s + 1.0);
    const auto head = specfun::gauss_jacobi_left(40, beta, 0.0, y0);
    double acc = 0.0;
    for (std::size_t i = 0; i < head.size(); ++i) acc += head.weights[i] * specfun::logistic(-s - head.nodes[i]);
    const auto tail = specfun::composite_legendre(40, 20, y0, y0 + 60.0 + std::max(0.0, -s));
    for (std::size_t i = 0; i < tail.size(); ++i)
        acc += tail.weights[i] * std::pow(tail.nodes[i], beta) * specfun::logistic(-s - tail.nodes[i]);
    return acc / m;
}

double lambda0(double alpha, int m, double s) { return thinning_moment(alpha, m, s) / (2.0 * kPi); }

double correction_coefficient(double alpha, int m, double s) {
    const double g = specfun::gamma_fn(alpha + 1.0);
    return 2.0 * kPi * lambda0(alpha, m, s) / (std::pow(2.0, 2.0 * alpha + 1.0) * g * g);
}

double expansion_prediction(double alpha, int m, double s, double x) {
    return correction_coefficient(alpha, m, s) * std::pow(x, 2.0 * alpha + 1.0);
}

ExpansionCheck expansion_check(const PotentialProfile& prof, double x) {
    ExpansionCheck r;
    r.numeric = prof.p_at(x) + singular_term(prof.alpha, x);
    r.predicted = expansion_prediction(prof.alpha, prof.m, prof.s, x);
    r.rel_err = std::abs(r.numeric - r.predicted) / std::abs(r.predicted);
    return r;
}

ExpansionCheck small_x_expansion_check(double alpha, int m, double s, double x) {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    ProfileOptions opt;
    opt.intervals = 16;
    opt.check_doubling = false;
    const auto prof = extract_p(alpha, m, s, 0.5 * x, 1.5 * x, opt);
    return expansion_check(prof, x);
}

std::complex<double> phi_small_x(double alpha, double zeta, double x) {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    const double pre = std::sqrt(kPi * x);
    if (zeta >= 0.0) return pre * specfun::bessel_I(alpha, x * std::sqrt(zeta));
    return pre * std::polar(1.0, 0.5 * kPi * alpha) * specfun::bessel_J(alpha, x * std::sqrt(-zeta));
}

namespace {

// Second derivative by central differences with step x/50, Richardson-extrapolated over h, h/2, h/4.
template <class F>
auto second_derivative(F&& f, double x) {
    const auto d2 = [&](double h) { return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h); };
    const double h = x / 50.0;
    const auto a = d2(h), b = d2(h / 2), c = d2(h / 4);
    const auto r1 = (4.0 * b - a) / 3.0, r2 = (4.0 * c - b) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

}  // namespace

double bessel_ode_residual(double alpha, double zeta, double x) {
    const auto f = [&](double y) { return phi_small_x(alpha, zeta, y); };
    const double coef = zeta + (4.0 * alpha * alpha - 1.0) / (4.0 * x * x);
    const auto res = second_derivative(f, x) - coef * f(x);
    return std::abs(res) / (std::abs(coef) * std::abs(f(x)));
}

double schroedinger_residual(double alpha, double zeta, double s, double x) {
    ProfileOptions opt;
    opt.intervals = 24;
    opt.check_doubling = false;
    const auto prof = extract_p(alpha, 1, s, 0.5 * x, 1.5 * x, opt);
    const auto f = [&](double y) { return phi_small_x(alpha, zeta, y); };
    const double coef = zeta + (4.0 * alpha * alpha - 1.0) / (4.0 * x * x);
    const auto res = second_derivative(f, x) - (zeta + 2.0 * prof.dp_at(x)) * f(x);
    return std::abs(res) / (std::abs(coef) * std::abs(f(x)));
}

}  // namespace nonlocal
}  // namespace hardedge
