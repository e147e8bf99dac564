#include "hardedge/symbols.hpp"

#include <cmath>
#include <string>

#include "hardedge/errors.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge {

void ModelConfig::validate() const {
    if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
    if (V.degree() < 1 || !(V.leading() > 0.0))
        throw DomainError("V must be a non-constant polynomial with positive leading coefficient");
    if (m < 1) throw DomainError("m must be a positive integer");
    if (n < 1) throw DomainError("n must be a positive integer");
    if (!(t > 0.0)) throw DomainError("t must be positive");
    if (Q.valuation() != m)
        throw DomainError("Q must vanish to order exactly m at the origin");
    if (std::abs(Q.c[m] - t) > 1e-12 * t)
        throw DomainError("leading coefficient of Q at the origin must equal t");
    for (int i = 0; i <= 180; ++i) {
        const double x = std::pow(10.0, -6.0 + 9.0 * i / 180.0);
        if (!(Q(x) > 0.0)) throw DomainError("Q must be positive on (0, inf)");
    }
    if (!s_infinite && !std::isfinite(s)) throw DomainError("s must be finite unless flagged infinite");
}

ModelConfig ModelConfig::with_s(double s_new) const {
    ModelConfig c = *this;
    c.s = s_new;
    c.s_infinite = false;
    return c;
}

ModelConfig ModelConfig::undeformed() const {
    ModelConfig c = *this;
    c.s_infinite = true;
    return c;
}

ModelConfig ModelConfig::with_n(int n_new) const {
    ModelConfig c = *this;
    c.n = n_new;
    return c;
}

nlohmann::json to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["alpha"] = cfg.alpha;
    j["V_coeffs"] = cfg.V.c;
    j["Q_coeffs"] = cfg.Q.c;
    j["m"] = cfg.m;
    j["t"] = cfg.t;
    if (cfg.s_infinite)
        j["s"] = "inf";
    else
        j["s"] = cfg.s;
    j["n"] = cfg.n;
    return j;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    cfg.alpha = j.value("alpha", 0.0);
    if (j.contains("V_coeffs")) cfg.V = Polynomial(j.at("V_coeffs").get<std::vector<double>>());
    if (j.contains("Q_coeffs")) cfg.Q = Polynomial(j.at("Q_coeffs").get<std::vector<double>>());
    cfg.m = j.value("m", cfg.Q.valuation() > 0 ? cfg.Q.valuation() : 1);
    if (j.contains("t"))
        cfg.t = j.at("t").get<double>();
    else if (cfg.Q.valuation() >= 1)
        cfg.t = cfg.Q.c[cfg.Q.valuation()];
    if (j.contains("s")) {
        const auto& s = j.at("s");
        if (s.is_string()) {
            const std::string v = s.get<std::string>();
            if (v != "inf" && v != "+inf" && v != "infinity")
                throw DomainError("s must be a number or \"inf\"");
            cfg.s_infinite = true;
        } else {
            cfg.s = s.get<double>();
        }
    }
    cfg.n = j.value("n", 1);
    cfg.validate();
    return cfg;
}

namespace symbols {

namespace {
double exponent(const ModelConfig& cfg, double x, double s) {
    return s + std::pow(static_cast<double>(cfg.n), 2 * cfg.m) * cfg.Q(x);
}
}  // namespace

double sigma_n(const ModelConfig& cfg, double x) {
    if (cfg.s_infinite) return 1.0;
    return sigma_n(cfg, x, cfg.s);
}

double sigma_n(const ModelConfig& cfg, double x, double s) {
    return specfun::logistic(exponent(cfg, x, s));
}

double log_sigma_n(const ModelConfig& cfg, double x, double s) {
    return -specfun::log1pexp(-exponent(cfg, x, s));
}

double one_minus_sigma_n(const ModelConfig& cfg, double x, double s) {
    return specfun::logistic(-exponent(cfg, x, s));
}

double sigma_phi(double zeta, double s, int m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return specfun::logistic(s + sign * std::pow(zeta, m));
}

double d_ds_sigma_phi(double zeta, double s, int m) {
    const double sig = sigma_phi(zeta, s, m);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sig * specfun::logistic(-(s + sign * std::pow(zeta, m)));
}

double d_ds_log_sigma_phi(double zeta, double s, int m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return specfun::logistic(-(s + sign * std::pow(zeta, m)));
}

double bessel_point_symbol(const ThinningScale& scale, int m, double u, double s) {
    return specfun::logistic(s + scale.u_param * std::pow(u, m));
}

}  // namespace symbols
}  // namespace hardedge
