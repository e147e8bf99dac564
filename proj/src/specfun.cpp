#include "hardedge/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hardedge/errors.hpp"

namespace hardedge::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

bool is_integer(double nu) { return std::abs(nu - std::round(nu)) < 1e-12; }

void check_order(double alpha) {
    if (!(alpha > -1.0)) throw DomainError("Bessel order must exceed -1");
}

// Series for J (sign = -1) or I (sign = +1) of order alpha at real z >= 0.
double bessel_series(double alpha, double z, double sign) {
    const double q = sign * 0.25 * z * z;
    double term = 1.0 / gamma_fn(alpha + 1.0);
    double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= q / (k * (alpha + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && k > z) break;
    }
    return std::pow(0.5 * z, alpha) * sum;
}

// Orthonormal Jacobi recurrence for (1-x)^a (1+x)^b: diagonal and off-diagonal (index k >= 1).
void jacobi_recurrence(int n, double a, double b, std::vector<double>& diag,
                       std::vector<double>& off) {
    diag.assign(n + 1, 0.0);
    off.assign(n + 1, 0.0);
    const double ab = a + b;
    for (int k = 0; k <= n; ++k) {
        if (k == 0) {
            diag[0] = (b - a) / (ab + 2.0);
        } else {
            const double c = 2.0 * k + ab;
            diag[k] = (b * b - a * a) / (c * (c + 2.0));
        }
    }
    for (int k = 1; k <= n; ++k) {
        const double c = 2.0 * k + ab;
        double b2;
        if (k == 1)
            b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b2 = 4.0 * k * (k + a) * (k + b) * (k + ab) / (c * c * (c + 1.0) * (c - 1.0));
        off[k] = std::sqrt(b2);
    }
}

}  // namespace

void QuadratureRule::append(const QuadratureRule& right) {
    nodes.insert(nodes.end(), right.nodes.begin(), right.nodes.end());
    weights.insert(weights.end(), right.weights.begin(), right.weights.end());
    if (nodes.size() == right.nodes.size()) lo = right.lo;
    hi = right.hi;
    map_scale = right.map_scale;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw DomainError("quadrature order must be positive");
    QuadratureRule rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

QuadratureRule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw DomainError("quadrature order must be positive");
    if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
    std::vector<double> diag, off;
    jacobi_recurrence(n, a, b, diag, off);
    const double log_mu0 = (a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                           std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0);
    const double p0 = std::exp(-0.5 * log_mu0);

    Eigen::VectorXd d(n), e(std::max(n - 1, 1));
    for (int k = 0; k < n; ++k) d(k) = diag[k];
    for (int k = 1; k < n; ++k) e(k - 1) = off[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e.head(std::max(n - 1, 0)), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolve failed");

    QuadratureRule rule;
    rule.lo = -1.0;
    rule.hi = 1.0;
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()(i);
        double sum_sq = 0.0;
        for (int it = 0; it < 3; ++it) {
            // Orthonormal recurrence with derivative; Newton step on p_n.
            double pm = 0.0, p = p0, dpm = 0.0, dp = 0.0;
            sum_sq = 0.0;
            for (int k = 0; k < n; ++k) {
                sum_sq += p * p;
                const double pn = ((x - diag[k]) * p - off[k] * pm) / off[k + 1];
                const double dpn = (p + (x - diag[k]) * dp - off[k] * dpm) / off[k + 1];
                pm = p;
                p = pn;
                dpm = dp;
                dp = dpn;
            }
            if (it < 2 && dp != 0.0) x -= p / dp;
        }
        rule.nodes.push_back(x);
        rule.weights.push_back(1.0 / sum_sq);
    }
    return rule;
}

QuadratureRule gauss_jacobi_left(int n, double beta, double lo, double hi) {
    QuadratureRule ref = gauss_jacobi(n, 0.0, beta);
    const double half = 0.5 * (hi - lo);
    const double scale = std::pow(half, beta + 1.0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ref.nodes[i] = lo + half * (ref.nodes[i] + 1.0);
        ref.weights[i] *= scale;
    }
    ref.lo = lo;
    ref.hi = hi;
    return ref;
}

QuadratureRule composite_legendre(int n_panels, int order, double lo, double hi) {
    QuadratureRule rule;
    const double h = (hi - lo) / n_panels;
    for (int p = 0; p < n_panels; ++p) rule.append(gauss_legendre(order, lo + p * h, lo + (p + 1) * h));
    rule.lo = lo;
    rule.hi = hi;
    return rule;
}

QuadratureRule semi_infinite(int n_panels, int order, double x0, double L) {
    QuadratureRule rule;
    double y0 = 0.0, width = 0.5;
    for (int p = 0; p < n_panels; ++p) {
        const QuadratureRule panel = gauss_legendre(order, y0, y0 + width);
        for (std::size_t i = 0; i < panel.size(); ++i) {
            const double y = panel.nodes[i];
            rule.nodes.push_back(x0 + L * y / (1.0 - y));
            rule.weights.push_back(panel.weights[i] * L / ((1.0 - y) * (1.0 - y)));
        }
        y0 += width;
        width *= 0.5;
    }
    rule.lo = x0;
    rule.hi = std::numeric_limits<double>::infinity();
    rule.map_scale = L;
    return rule;
}

double gamma_fn(double z) {
    if (!(z > 0.0)) throw DomainError("gamma_fn requires a positive argument");
    return std::tgamma(z);
}

double log_gamma(double z) {
    if (!(z > 0.0)) throw DomainError("log_gamma requires a positive argument");
    return std::lgamma(z);
}

double bessel_J(double alpha, double z) {
    check_order(alpha);
    if (z < 0.0) throw DomainError("bessel_J requires z >= 0");
    if (alpha >= 0.0) return std::cyl_bessel_j(alpha, z);
    if (z == 0.0) return std::numeric_limits<double>::infinity();
    if (z <= 4.0) return bessel_series(alpha, z, -1.0);
    return 2.0 * (alpha + 1.0) / z * std::cyl_bessel_j(alpha + 1.0, z) -
           std::cyl_bessel_j(alpha + 2.0, z);
}

double bessel_I(double alpha, double z) {
    check_order(alpha);
    if (z < 0.0) throw DomainError("bessel_I requires z >= 0");
    if (alpha >= 0.0) return std::cyl_bessel_i(alpha, z);
    if (z == 0.0) return std::numeric_limits<double>::infinity();
    if (z <= 4.0) return bessel_series(alpha, z, 1.0);
    return 2.0 * (alpha + 1.0) / z * std::cyl_bessel_i(alpha + 1.0, z) +
           std::cyl_bessel_i(alpha + 2.0, z);
}

double bessel_K(double alpha, double z) {
    check_order(alpha);
    if (!(z > 0.0)) throw DomainError("bessel_K requires z > 0");
    return std::cyl_bessel_k(std::abs(alpha), z);
}

double bessel_J_prime(double alpha, double z) {
    if (!(z > 0.0)) throw DomainError("Bessel derivatives require z > 0");
    return alpha / z * bessel_J(alpha, z) - bessel_J(alpha + 1.0, z);
}

double bessel_I_prime(double alpha, double z) {
    if (!(z > 0.0)) throw DomainError("Bessel derivatives require z > 0");
    return bessel_I(alpha + 1.0, z) + alpha / z * bessel_I(alpha, z);
}

double bessel_K_prime(double alpha, double z) {
    return -bessel_K(alpha + 1.0, z) + alpha / z * bessel_K(alpha, z);
}

std::complex<double> bessel_I(double nu, std::complex<double> z) {
    if (nu < 0.0 && is_integer(nu)) nu = -nu;
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    const std::complex<double> q = 0.25 * z * z;
    std::complex<double> term = 1.0 / std::tgamma(nu + 1.0);
    std::complex<double> sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && k > std::abs(z)) break;
    }
    return std::pow(0.5 * z, nu) * sum;
}

std::complex<double> bessel_K(double nu, std::complex<double> z) {
    nu = std::abs(nu);
    if (z == 0.0) throw DomainError("bessel_K undefined at z = 0");
    if (z.real() < 0.0) throw DomainError("complex bessel_K requires Re z >= 0");
    if (!is_integer(nu))
        return 0.5 * kPi * (bessel_I(-nu, z) - bessel_I(nu, z)) / std::sin(nu * kPi);

    const int n = static_cast<int>(std::round(nu));
    const std::complex<double> half = 0.5 * z, q = 0.25 * z * z;
    std::complex<double> finite = 0.0;
    if (n > 0) {
        std::complex<double> term = std::tgamma(static_cast<double>(n));  // (n-1)!/0!
        for (int k = 0; k < n; ++k) {
            finite += term;
            if (k + 1 < n) term *= -q / (static_cast<double>(k + 1) * (n - k - 1));
        }
        finite *= 0.5 * std::pow(half, -n);
    }
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    std::complex<double> log_part = -sgn * std::log(half) * bessel_I(static_cast<double>(n), z);

    // sum_k (psi(k+1) + psi(n+k+1)) q^k / (k! (n+k)!)
    double psi_k = -kEulerGamma, psi_nk = -kEulerGamma;
    for (int j = 1; j <= n; ++j) psi_nk += 1.0 / j;
    std::complex<double> term = 1.0 / std::tgamma(n + 1.0);
    std::complex<double> series = (psi_k + psi_nk) * term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * (n + k));
        psi_k += 1.0 / k;
        psi_nk += 1.0 / (n + k);
        const std::complex<double> add = (psi_k + psi_nk) * term;
        series += add;
        if (std::abs(add) < 1e-18 * std::abs(series) && k > std::abs(z)) break;
    }
    return finite + log_part + sgn * 0.5 * std::pow(half, n) * series;
}

std::complex<double> bessel_I_prime(double nu, std::complex<double> z) {
    return bessel_I(nu + 1.0, z) + nu / z * bessel_I(nu, z);
}

std::complex<double> bessel_K_prime(double nu, std::complex<double> z) {
    return -bessel_K(nu + 1.0, z) + nu / z * bessel_K(nu, z);
}

double polylog(double sigma, double z) {
    if (!(z > -1.0) || z > 0.0) throw DomainError("polylog requires z in (-1, 0]");
    if (z == 0.0) return 0.0;
    const double r = -z;
    if (r <= 0.5) {
        double sum = 0.0, zk = 1.0;
        for (int k = 1; k < 2000; ++k) {
            zk *= z;
            const double term = zk / std::pow(static_cast<double>(k), sigma);
            sum += term;
            if (std::abs(term) < 1e-19) break;
        }
        return sum;
    }
    // Cohen-Rodriguez Villegas-Zagier acceleration of sum_j (-1)^j r^{j+1}/(j+1)^sigma.
    const int n = 48;
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * std::pow(r, k + 1) / std::pow(static_cast<double>(k + 1), sigma);
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
    }
    return -s / d;
}

double F_beta(double beta, double s) {
    if (!(beta > -1.0)) throw DomainError("F_beta requires beta > -1");
    const auto g = [s](double x) { return log1pexp(-s - x); };
    double acc = gauss_jacobi_left(40, beta, 0.0, 1.0).integrate(g);
    // Panels of width 1 across the transition region x ~ -s, then a mapped tail.
    const double x1 = std::max(2.0, -s + 8.0);
    const int panels = static_cast<int>(std::ceil(x1 - 1.0));
    const QuadratureRule mid = composite_legendre(panels, 20, 1.0, 1.0 + panels);
    acc += mid.integrate([&](double x) { return std::pow(x, beta) * g(x); });
    const QuadratureRule tail = semi_infinite(20, 20, 1.0 + panels, 8.0);
    acc += tail.integrate([&](double x) { return std::pow(x, beta) * g(x); });
    return acc;
}

double F_beta_polylog(double beta, double s) {
    if (!(beta > -1.0)) throw DomainError("F_beta requires beta > -1");
    if (!(s > 0.0)) throw DomainError("polylog route requires s > 0");
    return -gamma_fn(beta + 1.0) * polylog(beta + 2.0, -std::exp(-s));
}

AsymptoticIntegral laguerre_asymptotic_integral(double beta,
                                                const std::function<double(double)>& f,
                                                const Polynomial& q, double t, double s,
                                                double delta) {
    if (!(beta > -1.0)) throw DomainError("beta must exceed -1");
    if (!(t > 0.0) || !(delta > 0.0)) throw DomainError("t and delta must be positive");
    const int m = q.valuation();
    if (m < 1 || q.c[m] <= 0.0) throw DomainError("q must vanish at 0 with positive leading term");
    for (int i = 0; i <= 200; ++i) {
        const double x = delta * std::pow(10.0, -6.0 + 6.0 * i / 200.0);
        if (!(q(x) > 0.0)) throw DomainError("q is not positive on (0, delta]");
    }
    const double q0 = q.c[m];
    const double x0 = std::min(delta, std::pow(1.0 / (t * q0), 1.0 / m));
    const auto g = [&](double x) { return f(x) * log1pexp(-s - t * q(x)); };

    double numeric = gauss_jacobi_left(30, beta, 0.0, x0).integrate(g);
    const double cutoff = std::min(delta, x0 * std::pow(60.0 + std::abs(s), 1.0 / m));
    if (cutoff > x0) {
        const int panels = std::max(1, static_cast<int>(std::ceil((cutoff - x0) / x0)));
        const QuadratureRule mid = composite_legendre(panels, 20, x0, cutoff);
        numeric += mid.integrate([&](double x) { return std::pow(x, beta) * g(x); });
    }
    if (delta > cutoff) {
        // Remaining mass is below e^{-60}; integrate it anyway on geometric panels.
        double a = cutoff;
        while (a < delta) {
            const double b = std::min(delta, 2.0 * a);
            numeric += gauss_legendre(20, a, b).integrate(
                [&](double x) { return std::pow(x, beta) * g(x); });
            a = b;
        }
    }

    const double e = (beta + 1.0) / m;
    AsymptoticIntegral out;
    out.numeric = numeric;
    out.prediction = f(0.0) / (m * std::pow(q0, e)) * std::pow(t, -e) * F_beta(e - 1.0, s);
    return out;
}

}  // namespace hardedge::specfun
