#include "hardedge/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardedge/errors.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge {

namespace {

constexpr double kPi = std::numbers::pi;

// Integral over theta in [0, pi/2] of g(theta), with panels refined geometrically towards
// a breakpoint theta_star where g may have a logarithmic singularity.
template <class G>
double graded_theta_integral(G&& g, double theta_star) {
    const double half_pi = 0.5 * kPi;
    double acc = 0.0;
    // Breakpoints p_k = star -/+ (length) 4^{-k} accumulate at the breakpoint.
    const auto side = [&](double far, double star) {
        const double len = star - far;
        if (len == 0.0) return;
        double prev = far;
        for (int k = 1; k <= 45; ++k) {
            const double next = star - len * std::pow(0.25, k);
            acc += specfun::gauss_legendre(16, std::min(prev, next), std::max(prev, next)).integrate(g);
            prev = next;
        }
    };
    side(0.0, theta_star);
    side(half_pi, theta_star);
    return acc;
}

}  // namespace

double EquilibriumData::density(double x) const {
    if (x <= 0.0 || x >= a) return 0.0;
    return std::sqrt((a - x) / x) * std::abs(h(x)) / kPi;
}

double EquilibriumData::log_potential(double x) const {
    // y = a sin^2(theta) turns mu'(y) dy into (2a/pi) cos^2(theta) h(y) dtheta.
    const double theta_star =
        x <= 0.0 ? 0.0 : (x >= a ? 0.5 * kPi : std::asin(std::sqrt(x / a)));
    const auto g = [&](double th) {
        const double s = std::sin(th), c = std::cos(th);
        const double y = a * s * s;
        const double d = std::abs(x - y);
        return (2.0 * a / kPi) * c * c * h(y) * (d > 0.0 ? std::log(d) : 0.0);
    };
    return graded_theta_integral(g, theta_star);
}

double EquilibriumData::effective_potential(double x) const {
    return 2.0 * log_potential(x) - V(x);
}

double EquilibriumData::phi(double z) const {
    if (z < 0.0) {
        // s = -r^2: integrand becomes -2 sqrt(a + r^2) h(-r^2) dr.
        const auto rule = specfun::gauss_legendre(40, 0.0, std::sqrt(-z));
        return rule.integrate([&](double r) { return -2.0 * std::sqrt(a + r * r) * h(-r * r); });
    }
    if (z >= a) {
        // s = a + r^2: integrand 2 r^2 h(a + r^2) / sqrt(a + r^2) dr.
        const auto rule = specfun::gauss_legendre(40, 0.0, std::sqrt(z - a));
        return rule.integrate(
            [&](double r) { return 2.0 * r * r * h(a + r * r) / std::sqrt(a + r * r); });
    }
    throw DomainError("phi is evaluated only off the support: z < 0 or z >= a");
}

double EquilibriumData::psi(double z) const {
    const double p = phi(z);
    return 0.25 * p * p;
}

nlohmann::json to_json(const EquilibriumData& eq) {
    nlohmann::json j;
    j["a"] = eq.a;
    j["h_coeffs"] = eq.h.c;
    j["kappa0"] = eq.kappa0;
    j["c_V"] = eq.c_V;
    j["ell_V"] = eq.ell_V;
    return j;
}

bool EquilibriumReport::passed(double tol_mass, double tol_el) const {
    return mass_defect <= tol_mass && euler_lagrange_sup <= tol_el && outside_margin > 0.0 &&
           min_interior_density > 0.0;
}

namespace equilibrium {

EquilibriumData solve_equilibrium(const Polynomial& V) {
    if (V.degree() < 1 || !(V.leading() > 0.0))
        throw DomainError("V must be a non-constant polynomial with positive leading coefficient");
    const Polynomial dV = V.derivative();
    std::vector<double> v(dV.c.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = 0.5 * dV.c[j];
    const std::size_t J = v.size();

    // c_k = binom(2k, k) / 4^k, the Taylor coefficients of (1 - w)^{-1/2}.
    std::vector<double> ck(J + 2, 1.0);
    for (std::size_t k = 1; k < ck.size(); ++k) ck[k] = ck[k - 1] * (2.0 * k - 1.0) / (2.0 * k);

    // Coefficient of 1/z in sqrt(z/(z-a)) V'(z)/2 must equal 1.
    const auto defect = [&](double a) {
        double acc = 0.0;
        for (std::size_t j = 0; j < J; ++j) acc += v[j] * ck[j + 1] * std::pow(a, j + 1.0);
        return acc - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    int expand = 0;
    while (defect(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++expand > 200) throw NumericalError("not one-cut in search window");
    }
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (defect(mid) > 0.0 ? hi : lo) = mid;
    }

    EquilibriumData eq;
    eq.V = V;
    eq.a = 0.5 * (lo + hi);
    std::vector<double> hc(J, 0.0);
    for (std::size_t i = 0; i < J; ++i)
        for (std::size_t j = i; j < J; ++j) hc[i] += v[j] * ck[j - i] * std::pow(eq.a, double(j - i));
    eq.h = Polynomial(hc);

    for (int i = 0; i <= 4000; ++i) {
        const double x = eq.a * i / 4000.0;
        if (!(eq.h(x) > 0.0)) throw NumericalError("not regular: density vanishes inside the support");
    }

    // Richardson extrapolation of sqrt(x) mu'(x) from x = a 10^{-4}, 10^{-5}, 10^{-6}.
    const auto g = [&](double x) { return std::sqrt(x) * eq.density(x); };
    const double x1 = eq.a * 1e-4, x2 = eq.a * 1e-5, x3 = eq.a * 1e-6;
    const double g1 = g(x1), g2 = g(x2), g3 = g(x3);
    const double r12 = (x2 * g1 - x1 * g2) / (x2 - x1);
    const double r23 = (x3 * g2 - x2 * g3) / (x3 - x2);
    eq.kappa0 = (x3 * r12 - x1 * r23) / (x3 - x1);
    eq.c_V = kPi * kPi * eq.kappa0 * eq.kappa0;
    eq.ell_V = eq.effective_potential(0.5 * eq.a);

    const EquilibriumReport report = check_equilibrium(eq);
    if (report.min_interior_density <= 0.0) throw NumericalError("not regular: density not positive");
    if (!report.passed())
        throw NumericalError("equilibrium invariants failed (mass defect " +
                             std::to_string(report.mass_defect) + ", Euler-Lagrange residual " +
                             std::to_string(report.euler_lagrange_sup) + ")");
    return eq;
}

EquilibriumReport check_equilibrium(const EquilibriumData& eq) {
    EquilibriumReport r;
    const auto rule = specfun::gauss_legendre(64, 0.0, 0.5 * kPi);
    const double mass = rule.integrate([&](double th) {
        const double s = std::sin(th), c = std::cos(th);
        return (2.0 * eq.a / kPi) * c * c * std::abs(eq.h(eq.a * s * s));
    });
    r.mass_defect = std::abs(mass - 1.0);

    const double delta = 1e-3 * eq.a;
    r.min_interior_density = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 40; ++i) {
        const double x = delta + (eq.a - 2.0 * delta) * i / 40.0;
        r.euler_lagrange_sup =
            std::max(r.euler_lagrange_sup, std::abs(eq.effective_potential(x) - eq.ell_V));
        r.min_interior_density = std::min(r.min_interior_density, eq.density(x));
    }
    r.outside_margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 40; ++i) {
        const double x = eq.a * (1.0 + 2.0 * std::pow(i / 40.0, 2.0));
        r.outside_margin = std::min(r.outside_margin, eq.ell_V - eq.effective_potential(x));
    }
    r.kappa0_closed_form = std::sqrt(eq.a) * std::abs(eq.h(0.0)) / kPi;
    const double z = -1e-9;
    r.psi_limit_defect = std::abs(eq.psi(z) / (-z) - eq.c_V);
    return r;
}

ThinningScale thinning_scale(const EquilibriumData& eq, double t, int m) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    if (m < 1) throw DomainError("m must be a positive integer");
    ThinningScale sc;
    sc.c_V = eq.c_V;
    sc.x_param = std::sqrt(4.0 * eq.c_V / std::pow(t, 1.0 / m));
    sc.u_param = t / std::pow(eq.c_V, m);
    return sc;
}

double p0_global_parametrix(const ModelConfig& cfg, const EquilibriumData& eq) {
    if (cfg.s_infinite) return 0.0;
    // x = a sin^2(theta) gives dx / sqrt(x (a - x)) = 2 dtheta.
    const auto g = [&](double th) {
        const double s = std::sin(th);
        return -symbols::log_sigma_n(cfg, eq.a * s * s, cfg.s);
    };
    const double n = cfg.n;
    const double scale = std::pow(cfg.t * std::pow(eq.a, cfg.m), -0.5 / cfg.m) / n;
    const double cutoff = std::min(0.5 * kPi, scale * std::pow(80.0 + std::abs(cfg.s), 0.5 / cfg.m));
    const auto integrate = [&](int per_scale) {
        const int panels = std::max(1, static_cast<int>(std::ceil(per_scale * cutoff / scale)));
        double acc = specfun::composite_legendre(panels, 20, 0.0, cutoff).integrate(g);
        if (cutoff < 0.5 * kPi) acc += specfun::composite_legendre(8, 20, cutoff, 0.5 * kPi).integrate(g);
        return acc / kPi;
    };
    const double coarse = integrate(2), fine = integrate(4);
    if (std::abs(coarse - fine) > 1e-12 * std::abs(fine) + 1e-300)
        throw NumericalError("p0 quadrature did not converge: " + std::to_string(coarse) + " vs " +
                             std::to_string(fine));
    return fine;
}

double p_infinity(const ModelConfig& cfg, const EquilibriumData& eq) {
    if (cfg.s_infinite) return 0.0;
    const double m = cfg.m;
    return std::pow(eq.a, -0.5) * std::pow(cfg.t, -0.5 / m) / (2.0 * kPi * m) *
           specfun::F_beta(0.5 / m - 1.0, cfg.s);
}

}  // namespace equilibrium
}  // namespace hardedge
