#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hardedge/errors.hpp"
#include "hardedge/specfun.hpp"

using namespace hardedge;
using namespace hardedge::specfun;

namespace {
constexpr double kPi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("gamma function values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel(gamma_fn(0.5), 1.7724538509055160) <= 1e-13);
    CHECK(rel(gamma_fn(5.0), 24.0) <= 1e-13);
    CHECK(rel(gamma_fn(7.3), 1271.4236336639088) <= 1e-13);
    CHECK(rel(log_gamma(7.3), std::log(1271.4236336639088)) <= 1e-13);
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
}

TEST_CASE("Gauss-Legendre integrates degree 2N-1 exactly") {
    const auto r = gauss_legendre(12, -0.3, 2.1);
    for (int k = 0; k <= 23; ++k) {
        const double exact = (std::pow(2.1, k + 1) - std::pow(-0.3, k + 1)) / (k + 1);
        CHECK(std::abs(r.integrate([k](double x) { return std::pow(x, k); }) - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
    }
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.weights[i] > 0.0);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
}

TEST_CASE("Gauss-Jacobi left rule integrates x^beta times polynomials") {
    for (double beta : {-0.6, 0.0, 0.3, 2.5}) {
        const auto r = gauss_jacobi_left(10, beta, 0.0, 2.0);
        for (int k = 0; k <= 19; ++k) {
            const double exact = std::pow(2.0, k + beta + 1) / (k + beta + 1);
            CHECK(rel(r.integrate([k](double x) { return std::pow(x, k); }), exact) <= 1e-12);
        }
    }
}

TEST_CASE("semi-infinite rule reproduces the exponential moment") {
    const auto r = semi_infinite(30, 16, 0.0, 2.0);
    CHECK(rel(r.integrate([](double x) { return std::exp(-x); }), 1.0) <= 1e-12);
    CHECK(rel(r.integrate([](double x) { return x * x * std::exp(-0.5 * x); }), 16.0) <= 1e-12);
}

TEST_CASE("real Bessel functions") {
    CHECK(bessel_J(0.0, 0.0) == 1.0);
    CHECK(bessel_I(0.0, 0.0) == 1.0);
    CHECK(rel(bessel_I(0.0, 2.0), 2.2795853023360673) <= 1e-13);
    CHECK(rel(bessel_K(0.3, 1.7), 0.16907305227213439) <= 1e-11);
    CHECK(rel(bessel_I(2.5, 7.0), 104.61336757234871) <= 1e-11);
    CHECK(rel(bessel_J(-0.5, 3.0), -0.45604882079463318) <= 1e-11);
    CHECK(rel(bessel_J(0.3, 40.0), 0.063616304779135645) <= 1e-10);
    const double w = bessel_I(0.5, 1.0) * bessel_K_prime(0.5, 1.0) - bessel_I_prime(0.5, 1.0) * bessel_K(0.5, 1.0);
    CHECK(w == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_J(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_K(0.5, 0.0), DomainError);
}

TEST_CASE("Bessel recurrence holds on a grid") {
    for (double a : {-0.5, 0.3, 1.0, 2.5})
        for (double z : {0.3, 2.0, 9.0, 19.9, 20.1, 45.0}) {
            const double lhs = bessel_J(a + 1.0, z) + (a - 1.0 > -1.0 ? bessel_J(a - 1.0, z) : 0.0);
            if (a - 1.0 <= -1.0) continue;
            CHECK(std::abs(lhs - 2.0 * a / z * bessel_J(a, z)) <= 1e-9);
        }
}

TEST_CASE("complex Bessel functions agree with the real ones on the positive axis") {
    for (double a : {0.0, 0.3, 1.0, 2.0})
        for (double z : {0.2, 1.5, 6.0}) {
            CHECK(std::abs(bessel_I(a, std::complex<double>(z, 0.0)) - bessel_I(a, z)) <= 1e-12 * bessel_I(a, z));
            CHECK(std::abs(bessel_K(a, std::complex<double>(z, 0.0)) - bessel_K(a, z)) <= 1e-10 * bessel_K(a, z));
        }
    // I_alpha(iy) = e^{i pi alpha/2} J_alpha(y)
    const auto v = bessel_I(0.7, std::complex<double>(0.0, 2.0));
    CHECK(std::abs(v - std::polar(1.0, 0.35 * kPi) * bessel_J(0.7, 2.0)) <= 1e-13);
}

TEST_CASE("polylogarithm") {
    CHECK(polylog(2.0, 0.0) == 0.0);
    CHECK(std::abs(polylog(2.5, -std::exp(-3.0)) - (-0.049356612790684162)) <= 1e-13);
    CHECK(std::abs(polylog(2.0, -0.999999) - (-0.82246634027683606)) <= 1e-13);
    CHECK(std::abs(polylog(0.0, -0.9) - (-0.9 / 1.9)) <= 1e-13);
    CHECK(std::abs(polylog(-1.0, -0.9) - (-0.9 / (1.9 * 1.9))) <= 1e-13);
    CHECK_THROWS_AS(polylog(2.0, -1.0), DomainError);
    CHECK_THROWS_AS(polylog(2.0, 0.5), DomainError);
}

TEST_CASE("F_beta by quadrature and through the polylogarithm") {
    for (double b : {-0.5, 0.0, 1.5})
        for (double s : {0.5, 1.0, 3.0}) CHECK(std::abs(F_beta(b, s) - F_beta_polylog(b, s)) <= 1e-10);
    CHECK(std::abs(F_beta(1.5, 2.0) - 0.17782178138350520) <= 1e-12);
    CHECK(std::abs(F_beta(-0.5, 0.5) - 0.89958609367284949) <= 1e-12);
    CHECK(std::abs(F_beta(0.0, -3.0) - 6.0957533465094022) <= 1e-11);
    CHECK(std::abs(F_beta(0.0, 1e-8) - kPi * kPi / 12.0) <= 1e-7);
    CHECK(rel(F_beta(0.0, 30.0), std::exp(-30.0)) <= 1e-12);
    CHECK_THROWS_AS(F_beta(-1.0, 1.0), DomainError);
}

TEST_CASE("Laplace-type integral approaches its leading prediction") {
    {
        const auto r = laguerre_asymptotic_integral(0.0, [](double) { return 1.0; }, Polynomial({0.0, 1.0}), 100.0, 1.0, 1.0);
        // exact: (F_0(1) - F_0(1 + t)) / t
        CHECK(rel(r.numeric, (F_beta(0.0, 1.0) - F_beta(0.0, 101.0)) / 100.0) <= 1e-12);
    }
    {
        const auto r = laguerre_asymptotic_integral(0.0, [](double) { return 1.0; }, Polynomial({0.0, 0.0, 1.0}), 1e4, 1.0, 1.0);
        CHECK(r.ratio() >= 0.99);
        CHECK(r.ratio() <= 1.01);
    }
    {
        const auto r = laguerre_asymptotic_integral(0.0, [](double x) { return 1.0 + x; }, Polynomial({0.0, 1.0}), 1e6, 0.0, 0.5);
        CHECK(std::abs(r.ratio() - 1.0) <= 1e-4);
    }
    CHECK_THROWS_AS(laguerre_asymptotic_integral(0.0, [](double) { return 1.0; }, Polynomial({0.0, -1.0}), 10.0, 0.0, 1.0),
                    DomainError);
}

TEST_CASE("stable logistic helpers") {
    CHECK(logistic(0.0) == 0.5);
    CHECK(logistic(1e4) == 1.0);
    CHECK(logistic(-1e4) == 0.0);
    CHECK(log1pexp(-700.0) > 0.0);
    CHECK(log1pexp(1e4) == 1e4);
}
