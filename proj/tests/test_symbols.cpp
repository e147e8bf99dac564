#include <doctest.h>

#include <cmath>

#include "hardedge/errors.hpp"
#include "hardedge/symbols.hpp"

using namespace hardedge;

namespace {
ModelConfig linear_config(int n, double s) {
    ModelConfig c;
    c.V = Polynomial({0.0, 1.0});
    c.Q = Polynomial({0.0, 1.0});
    c.m = 1;
    c.t = 1.0;
    c.n = n;
    c.s = s;
    return c;
}
}  // namespace

TEST_CASE("sigma_n values") {
    const auto c = linear_config(10, 0.0);
    CHECK(symbols::sigma_n(c, 0.01) == doctest::Approx(0.7310585786300049).epsilon(1e-14));
    CHECK(symbols::sigma_n(linear_config(1, 0.0), 0.0) == 0.5);
    auto inf = c;
    inf.s_infinite = true;
    CHECK(symbols::sigma_n(inf, 0.3) == 1.0);
    CHECK(symbols::log_sigma_n(c, 0.0, -800.0) == doctest::Approx(-800.0));
    CHECK(symbols::one_minus_sigma_n(c, 0.5, 0.0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-12));
}

TEST_CASE("sigma_n is increasing in s") {
    const auto c = linear_config(5, 0.0);
    for (double x : {0.0, 1e-3, 0.1, 2.0}) {
        double prev = 0.0;
        for (double s : {-10.0, -1.0, 0.0, 2.0, 30.0}) {
            const double v = symbols::sigma_n(c, x, s);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("sigma_Phi and its s-derivatives") {
    CHECK(symbols::sigma_phi(0.0, 0.7, 3) == doctest::Approx(1.0 / (1.0 + std::exp(-0.7))));
    CHECK(symbols::d_ds_sigma_phi(0.0, 0.0, 1) == doctest::Approx(0.25));
    for (double z : {-2.0, -0.5, 0.4})
        for (int m : {1, 2, 3}) {
            const double s = 0.3, h = 1e-5;
            const double fd = (symbols::sigma_phi(z, s + h, m) - symbols::sigma_phi(z, s - h, m)) / (2 * h);
            CHECK(symbols::d_ds_sigma_phi(z, s, m) == doctest::Approx(fd).epsilon(1e-8));
            CHECK(symbols::d_ds_log_sigma_phi(z, s, m) == doctest::Approx(1.0 - symbols::sigma_phi(z, s, m)));
        }
}

TEST_CASE("Bessel-point symbol matches sigma_Phi(-4u/x^2)") {
    for (int m : {1, 2, 3}) {
        ThinningScale sc;
        sc.x_param = 1.7;
        sc.u_param = std::pow(2.0 / sc.x_param, 2 * m);
        for (double u : {0.01, 0.5, 2.0, 7.0}) {
            const double direct = symbols::sigma_phi(-4.0 * u / (sc.x_param * sc.x_param), -0.4, m);
            CHECK(symbols::bessel_point_symbol(sc, m, u, -0.4) == doctest::Approx(direct).epsilon(1e-14));
            CHECK(direct >= 1.0 / (1.0 + std::exp(0.4)));
        }
    }
}

TEST_CASE("ModelConfig validation") {
    CHECK_NOTHROW(linear_config(3, 0.0).validate());
    auto c = linear_config(3, 0.0);
    c.alpha = -1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = linear_config(3, 0.0);
    c.V = Polynomial({0.0, -1.0});
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = linear_config(3, 0.0);
    c.Q = Polynomial({1.0, 1.0});
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = linear_config(3, 0.0);
    c.t = 2.0;  // Q(x)/x -> 1, not 2
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = linear_config(3, 0.0);
    c.Q = Polynomial({0.0, 1.0, -1.0});  // negative for x > 1
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("ModelConfig JSON round trip") {
    auto c = linear_config(7, -1.25);
    c.alpha = 0.3;
    c.Q = Polynomial({0.0, 0.0, 2.0, 0.5});
    c.m = 2;
    c.t = 2.0;
    const auto back = model_config_from_json(to_json(c));
    CHECK(back.alpha == c.alpha);
    CHECK(back.Q.c == c.Q.c);
    CHECK(back.V.c == c.V.c);
    CHECK(back.m == 2);
    CHECK(back.t == 2.0);
    CHECK(back.s == -1.25);
    CHECK(back.n == 7);
    auto inf = c;
    inf.s_infinite = true;
    const auto j = to_json(inf);
    CHECK(j.at("s") == "inf");
    CHECK(model_config_from_json(j).s_infinite);
    CHECK_THROWS(model_config_from_json(nlohmann::json{{"s", "huge"}}));
}
