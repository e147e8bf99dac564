#include <doctest.h>

#include <cmath>

#include "hardedge/bessel_limit.hpp"
#include "hardedge/errors.hpp"
#include "hardedge/specfun.hpp"

using namespace hardedge;
using namespace hardedge::bessel;

TEST_CASE("Bessel kernel values") {
    CHECK(bessel_kernel(0.0, 1.0, 2.0) == doctest::Approx(0.17157233693895691).epsilon(1e-13));
    CHECK(bessel_kernel(0.7, 1.0, 2.0) == doctest::Approx(0.064965750830118667).epsilon(1e-13));
    CHECK(bessel_kernel(0.0, 1.0, 1.0) == doctest::Approx(0.19479300438203078).epsilon(1e-13));
    CHECK(bessel_kernel(0.7, 3.0, 3.0) == doctest::Approx(0.082976652821139342).epsilon(1e-13));
    // continuity across the confluent branch
    CHECK(bessel_kernel(0.7, 3.0, 3.0 + 1e-6) == doctest::Approx(bessel_kernel(0.7, 3.0, 3.0)).epsilon(1e-6));
    CHECK(bessel_kernel(0.3, 2.0, 5.0) == doctest::Approx(bessel_kernel(0.3, 5.0, 2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(bessel_kernel(0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_kernel(-1.0, 1.0, 2.0), DomainError);
}

TEST_CASE("entire parts") {
    CHECK(entire_j(0.5, 2.0) == doctest::Approx(0.55728725771229696).epsilon(1e-13));
    CHECK(entire_j(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double a : {0.0, 0.4, 1.5}) {
        const double u = 0.8, v = 2.3;
        CHECK(bessel_kernel_entire(a, u, v) * std::pow(u * v, a / 2) == doctest::Approx(bessel_kernel(a, u, v)).epsilon(1e-13));
    }
    // hard-edge density at the origin: J_0(0+, 0+) = 1/4
    CHECK(bessel_kernel_entire(0.0, 1e-300, 1e-300) == doctest::Approx(0.25));
    CHECK(classical_limit_kernel(0.3, 0.25, 0.5) == doctest::Approx(4.0 * bessel_kernel(0.3, 1.0, 2.0)).epsilon(1e-15));
}

TEST_CASE("thinned Fredholm determinant against an independent Nystrom oracle") {
    struct Case {
        double alpha, s, x;
        int m;
        double oracle;
    };
    for (const auto& c : {Case{0.0, 0.0, 1.0, 1, -0.14300916480016664}, Case{0.0, 0.0, 1.5, 1, -0.26533828666135134},
                          Case{0.5, -2.0, 1.0, 1, -0.19428634641338358}, Case{2.0, 1.0, 1.2, 1, -0.0016357532066595434},
                          Case{0.0, 0.0, 1.0, 2, -0.12192015743729864}, Case{0.0, -1.0, 0.8, 3, -0.1284412798614141}}) {
        const auto sc = scale_from_x(c.x, c.m);
        const double v = log_statistic_fredholm(c.alpha, sc, c.m, c.s);
        CHECK(std::abs(v - c.oracle) <= 1e-12);
        CHECK(fredholm_det(build_operator(c.alpha, sc, c.m, c.s)) == doctest::Approx(std::exp(c.oracle)).epsilon(1e-12));
    }
}

TEST_CASE("trace and determinant routes agree") {
    for (double alpha : {0.0, 0.5, -0.5}) {
        const auto sc = scale_from_x(1.0, 1);
        const double a = log_statistic_fredholm(alpha, sc, 1, 0.5);
        const double b = log_statistic_trace(alpha, sc, 1, 0.5);
        CHECK(std::abs(a - b) <= 1e-10);
    }
}

TEST_CASE("discretization is converged") {
    const auto sc = scale_from_x(1.0, 1);
    const double base = log_statistic_fredholm(0.3, sc, 1, -3.0);
    OperatorOptions o;
    o.order = 28;
    CHECK(std::abs(log_statistic_fredholm(0.3, sc, 1, -3.0, o) - base) <= 1e-12);
    o = {};
    o.refine = 2.0;
    CHECK(std::abs(log_statistic_fredholm(0.3, sc, 1, -3.0, o) - base) <= 1e-12);
    o = {};
    o.widen = 1.5;
    CHECK(std::abs(log_statistic_fredholm(0.3, sc, 1, -3.0, o) - base) <= 1e-12);
}

TEST_CASE("statistic is increasing in s and tends to 1") {
    const auto sc = scale_from_x(1.0, 1);
    double prev = -1e300;
    for (double s : {-4.0, -1.0, 0.0, 2.0, 8.0}) {
        const double v = log_statistic_fredholm(0.0, sc, 1, s);
        CHECK(v < 0.0);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(std::abs(log_statistic_fredholm(0.0, sc, 1, 30.0)) <= 1e-12);
    // leading behaviour -e^{-s} int_0^inf J(w,w) e^{-w} dw as s -> inf
    const auto op = build_operator(0.0, sc, 1, 20.0);
    double tr = 0.0;
    for (std::size_t i = 0; i < op.nodes.size(); ++i) tr += op.matrix(i, i);
    CHECK(log_fredholm_det(op) == doctest::Approx(-tr).epsilon(1e-7));
}

TEST_CASE("conditional thinned kernel against the resolvent oracle") {
    {
        const ThinnedKernel k(build_operator(0.5, scale_from_x(1.0, 1), 1, 0.0));
        CHECK(k(0.3, 0.7) == doctest::Approx(0.34371640368090360).epsilon(1e-11));
        CHECK(k(1.0, 1.0) == doctest::Approx(0.39189930038171006).epsilon(1e-11));
        CHECK(k(0.7, 0.3) == doctest::Approx(k(0.3, 0.7)).epsilon(1e-13));
        CHECK(k.in_bessel_variable(1.2, 2.8) == doctest::Approx(k(0.3, 0.7) / 4.0).epsilon(1e-13));
    }
    {
        const ThinnedKernel k(build_operator(0.0, scale_from_x(1.3, 2), 2, -1.0));
        CHECK(k(0.5, 2.0) == doctest::Approx(0.27828780061387790).epsilon(1e-11));
        CHECK(k(2.0, 2.0) == doctest::Approx(0.23814625556259797).epsilon(1e-11));
    }
}

TEST_CASE("conditional kernel degenerates to the classical one as s grows") {
    const std::vector<double> grid{0.1, 0.5, 1.0, 3.0, 10.0};
    const auto lim = classical_limit_table(0.0, grid);
    CHECK(lim.kind == "bessel");
    double prev = 1.0;
    for (double s : {5.0, 10.0, 15.0}) {
        const auto t = conditional_thinned_kernel(0.0, scale_from_x(1.0, 1), 1, s, grid);
        CHECK(t.kind == "conditional-thinned");
        const double dev = (t.values - lim.values).cwiseAbs().maxCoeff();
        CHECK(dev <= 10.0 * std::exp(-s));
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("s = +inf operator reproduces the classical kernel") {
    const ThinnedKernel k(build_operator_infinite(0.4, scale_from_x(1.0, 1), 1));
    for (double u : {0.2, 1.0, 4.0})
        CHECK(k(u, 1.5) == doctest::Approx(classical_limit_kernel(0.4, u, 1.5)).epsilon(1e-12));
}

TEST_CASE("scale from x") {
    const auto sc = scale_from_x(1.7, 3);
    CHECK(sc.x_param == 1.7);
    CHECK(sc.u_param == doctest::Approx(std::pow(2.0 / 1.7, 6)));
    CHECK(sc.c_V == 1.0);
}
