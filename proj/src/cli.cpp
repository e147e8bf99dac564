#include "hardedge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "hardedge/bessel_limit.hpp"
#include "hardedge/equilibrium.hpp"
#include "hardedge/errors.hpp"
#include "hardedge/format.hpp"
#include "hardedge/mc.hpp"
#include "hardedge/nonlocal.hpp"
#include "hardedge/ops_core.hpp"
#include "hardedge/parallel.hpp"
#include "hardedge/parametrix.hpp"
#include "hardedge/specfun.hpp"

namespace hardedge::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Raised for malformed specs; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> sorted_grid(const json& j, const char* key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    auto v = j.at(key).get<std::vector<T>>();
    if (v.empty()) throw UsageError(std::string(key) + " must be nonempty");
    if (!std::is_sorted(v.begin(), v.end())) throw UsageError(std::string(key) + " must be sorted");
    return v;
}

std::string csv_header(const ExperimentSpec& spec) { return "# config: " + spec.raw.dump() + "\n"; }

void write_file(const ExperimentSpec& spec, const std::string& name, const std::string& body) {
    const fs::path path = fs::path(spec.out_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw NumericalError("cannot write " + path.string());
    os << body;
}

void write_json(const ExperimentSpec& spec, const std::string& name, json body) {
    body["config"] = spec.raw;
    write_file(spec, name, body.dump(2) + "\n");
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    return fmt17(v);
}

const ModelConfig& require_model(const ExperimentSpec& spec) {
    if (!spec.model) throw UsageError("config must contain a \"model\" object");
    return *spec.model;
}

ThinningScale scale_for(const ModelConfig& cfg, const EquilibriumData& eq) {
    return equilibrium::thinning_scale(eq, cfg.t, cfg.m);
}

bool linear_unit_V(const ModelConfig& cfg) {
    return cfg.V.c.size() == 2 && cfg.V.c[0] == 0.0 && cfg.V.c[1] == 1.0;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bessel::OperatorOptions operator_options(const ExperimentSpec& spec) {
    bessel::OperatorOptions o;
    o.order = spec.operator_order;
    return o;
}

ops::BuildOptions build_options(const ExperimentSpec& spec) {
    ops::BuildOptions o;
    o.order = spec.order;
    return o;
}

double limiting_log_statistic(const ModelConfig& cfg, const ThinningScale& sc, double s,
                              const bessel::OperatorOptions& o) {
    return bessel::log_statistic_fredholm(cfg.alpha, sc, cfg.m, s, o);
}

}  // namespace

double ExperimentSpec::tolerance(const std::string& key, double fallback) const {
    if (tolerances.is_object() && tolerances.contains(key)) return tolerances.at(key).get<double>();
    return fallback;
}

json Check::to_json() const {
    json j{{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", passed}};
    if (!note.empty()) j["note"] = note;
    return j;
}

ExperimentSpec parse_spec(const std::string& command, const json& config) {
    if (!config.is_object()) throw UsageError("config must be a JSON object");
    ExperimentSpec spec;
    spec.command = command;
    spec.raw = config;
    try {
        if (config.contains("model")) {
            spec.model = model_config_from_json(config.at("model"));
            spec.model->validate();
        }
        spec.s_grid = sorted_grid<double>(config, "s_grid", {});
        if (spec.s_grid.empty() && spec.model && !spec.model->s_infinite) spec.s_grid = {spec.model->s};
        spec.u_grid = sorted_grid<double>(config, "u_grid", spec.u_grid);
        for (double u : spec.u_grid)
            if (!(u > 0.0)) throw UsageError("u_grid entries must be positive");
        spec.n_list = sorted_grid<int>(config, "n_list", {});
        for (int n : spec.n_list)
            if (n < 1 || n > ops::kMaxN) throw UsageError("n_list entries must lie in [1, 400]");
        if (config.contains("x_grid")) {
            const auto& x = config.at("x_grid");
            spec.x_min = x.value("min", spec.x_min);
            spec.x_max = x.value("max", spec.x_max);
            spec.x_intervals = x.value("intervals", spec.x_intervals);
            if (!(spec.x_min > 0.0) || !(spec.x_max > spec.x_min))
                throw UsageError("x_grid must satisfy 0 < min < max");
        }
        if (config.contains("quadrature")) {
            const auto& q = config.at("quadrature");
            spec.order = q.value("order", spec.order);
            spec.operator_order = q.value("operator_order", spec.operator_order);
        }
        spec.mc_n = spec.model ? spec.model->n : 50;
        if (config.contains("mc")) {
            const auto& m = config.at("mc");
            spec.mc_samples = m.value("samples", spec.mc_samples);
            spec.mc_n = m.value("n", spec.mc_n);
            spec.seed = m.value("seed", spec.seed);
            spec.mc_enabled = m.value("enabled", spec.mc_enabled);
            spec.dump_raw = m.value("dump_raw", spec.dump_raw);
            if (spec.mc_samples < 2) throw UsageError("mc.samples must be at least 2");
        }
        if (config.contains("verify"))
            spec.parametrix_alphas =
                config.at("verify").value("parametrix_alphas", spec.parametrix_alphas);
        if (config.contains("tolerances")) spec.tolerances = config.at("tolerances");
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed config: ") + e.what());
    } catch (const DomainError& e) {
        throw UsageError(std::string("invalid model: ") + e.what());
    }
    return spec;
}

int cmd_kernel(const ExperimentSpec& spec) {
    const ModelConfig& cfg = require_model(spec);
    const auto eq = equilibrium::solve_equilibrium(cfg.V);
    const auto sc = scale_for(cfg, eq);
    const auto& g = spec.u_grid;
    const std::size_t G = g.size();

    const bessel::ThinnedKernel K(cfg.s_infinite
                                      ? bessel::build_operator_infinite(cfg.alpha, sc, cfg.m, operator_options(spec))
                                      : bessel::build_operator(cfg.alpha, sc, cfg.m, cfg.s, operator_options(spec)));
    auto opt = build_options(spec);
    opt.verify = false;
    const auto tab = ops::build_recurrence(cfg, eq, opt);

    std::vector<double> bes(G * G), cond(G * G), fin(G * G);
    parallel::parallel_for(G, spec.threads, [&](std::size_t i) {
        for (std::size_t k = 0; k < G; ++k) {
            // Hard-edge variables: K_alpha(u, v) degenerates to 4 J_alpha(4u, 4v) when the symbol is 1.
            bes[i * G + k] = bessel::classical_limit_kernel(cfg.alpha, g[i], g[k]);
            cond[i * G + k] = K(g[i], g[k]);
            fin[i * G + k] = ops::scaled_hard_edge_kernel(tab, eq, g[i], g[k]);
        }
    });

    std::ostringstream os;
    os << csv_header(spec) << "u,v,bessel,conditional,finite_n,dev_cond_vs_finite\n";
    double max_dev = 0.0, max_cond_bessel = 0.0;
    for (std::size_t i = 0; i < G; ++i)
        for (std::size_t k = 0; k < G; ++k) {
            const std::size_t idx = i * G + k;
            const double dev = std::abs(fin[idx] - cond[idx]) / std::abs(cond[idx]);
            max_dev = std::max(max_dev, dev);
            max_cond_bessel = std::max(max_cond_bessel, std::abs(cond[idx] - bes[idx]));
            os << num(g[i]) << ',' << num(g[k]) << ',' << num(bes[idx]) << ',' << num(cond[idx]) << ','
               << num(fin[idx]) << ',' << num(dev) << '\n';
        }
    write_file(spec, "kernel.csv", os.str());

    const double tol = spec.tolerance("kernel_dev", 0.02);
    const bool ok = max_dev <= tol;
    write_json(spec, "kernel_summary.json",
               {{"n", cfg.n},
                {"x_param", sc.x_param},
                {"u_param", sc.u_param},
                {"max_rel_dev_finite_vs_conditional", max_dev},
                {"max_abs_dev_conditional_vs_bessel", max_cond_bessel},
                {"tolerance", tol},
                {"pass", ok}});
    std::cout << "kernel: max relative deviation " << max_dev << (ok ? " (pass)" : " (FAIL)") << '\n';
    return ok ? kExitOk : kExitTolerance;
}

int cmd_statistic(const ExperimentSpec& spec) {
    const ModelConfig& cfg = require_model(spec);
    if (spec.s_grid.empty()) throw UsageError("s_grid must be nonempty");
    const auto eq = equilibrium::solve_equilibrium(cfg.V);
    const auto sc = scale_for(cfg, eq);
    const auto bopt = build_options(spec);
    const auto oopt = operator_options(spec);
    const std::size_t S = spec.s_grid.size();

    std::vector<ops::StatisticRoutes> routes(S);
    std::vector<double> limit(S);
    parallel::parallel_for(S, spec.threads, [&](std::size_t i) {
        const double s = spec.s_grid[i];
        routes[i] = ops::log_statistic_all_routes(cfg.with_s(s), eq, bopt);
        limit[i] = limiting_log_statistic(cfg, sc, s, oopt);
    });

    const bool with_mc = spec.mc_enabled && linear_unit_V(cfg);
    std::vector<Estimate> mcest(S);
    if (with_mc) {
        const auto batch = mc::sample_batch(cfg.n, cfg.alpha, spec.mc_samples, spec.seed, spec.threads);
        for (std::size_t i = 0; i < S; ++i) mcest[i] = mc::estimate_L(batch, cfg.with_s(spec.s_grid[i]));
    }

    const double tol = spec.tolerance("route_agreement", 1e-6);
    const double zmax = spec.tolerance("mc_sigma", 3.0);
    double max_route = 0.0, max_z = 0.0;
    std::ostringstream os;
    os << csv_header(spec) << "s,logL_gamma,logL_det,logL_deform,logL_limit,logL_mc,mc_stderr\n";
    for (std::size_t i = 0; i < S; ++i) {
        const auto& r = routes[i];
        max_route = std::max({max_route, std::abs(r.gamma - r.det), std::abs(r.gamma - r.deformation),
                              std::abs(r.det - r.deformation)});
        double lmc = std::numeric_limits<double>::quiet_NaN(), lse = lmc;
        if (with_mc) {
            lmc = std::log(mcest[i].mean);
            lse = mcest[i].stderr_ / mcest[i].mean;
            if (mcest[i].stderr_ > 0.0)
                max_z = std::max(max_z, std::abs(mcest[i].mean - std::exp(r.gamma)) / mcest[i].stderr_);
        }
        os << num(spec.s_grid[i]) << ',' << num(r.gamma) << ',' << num(r.det) << ',' << num(r.deformation)
           << ',' << num(limit[i]) << ',' << num(lmc) << ',' << num(lse) << '\n';
    }
    write_file(spec, "statistic.csv", os.str());

    json report{{"max_route_disagreement", max_route}, {"route_tolerance", tol}, {"mc", with_mc}};
    bool ok = max_route <= tol;
    if (with_mc) {
        report["mc_max_z"] = max_z;
        report["mc_sigma"] = zmax;
        ok = ok && max_z <= zmax;
    }

    if (!spec.n_list.empty()) {
        std::ostringstream ns;
        ns << csv_header(spec) << "s,n,logL_gamma,logL_limit,abs_dev\n";
        json trend = json::array();
        bool decreasing = true;
        for (std::size_t i = 0; i < S; ++i) {
            const double s = spec.s_grid[i];
            std::vector<double> devs;
            for (int n : spec.n_list) {
                const auto c = cfg.with_s(s).with_n(n);
                auto o = bopt;
                o.verify = false;
                const auto rule = ops::make_rule(c, eq, s, o);
                const double lg = ops::log_statistic_gamma_route(ops::build_recurrence(c, rule, o),
                                                                 ops::build_recurrence(c.undeformed(), rule, o));
                const double dev = std::abs(lg - limit[i]);
                devs.push_back(dev);
                ns << num(s) << ',' << n << ',' << num(lg) << ',' << num(limit[i]) << ',' << num(dev) << '\n';
            }
            for (std::size_t k = 1; k < devs.size(); ++k) decreasing = decreasing && devs[k] < devs[k - 1];
            trend.push_back({{"s", s}, {"abs_dev", devs}});
        }
        write_file(spec, "statistic_n.csv", ns.str());
        report["n_list"] = spec.n_list;
        report["n_trend"] = trend;
        report["n_trend_decreasing"] = decreasing;
        ok = ok && decreasing;
    }
    report["pass"] = ok;
    write_json(spec, "statistic_report.json", report);
    std::cout << "statistic: max route disagreement " << max_route << (ok ? " (pass)" : " (FAIL)") << '\n';
    return ok ? kExitOk : kExitTolerance;
}

namespace {

Check make_check(std::string name, double value, double tol, std::string note = {}) {
    return Check{std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(note)};
}

void specfun_checks(std::vector<Check>& out) {
    double worst = 0.0;
    for (double b : {-0.5, 0.0, 1.5})
        for (double s : {0.5, 1.0, 3.0})
            worst = std::max(worst, std::abs(specfun::F_beta(b, s) + specfun::gamma_fn(b + 1.0) *
                                                                         specfun::polylog(b + 2.0, -std::exp(-s))));
    out.push_back(make_check("specfun.F_beta_polylog_identity", worst, 1e-10));
    double rec = 0.0;
    for (double a : {0.3, 1.0, 2.5})
        for (double z : {0.5, 3.0, 12.0, 30.0}) {
            const double lhs = specfun::bessel_J(a - 1.0, z) + specfun::bessel_J(a + 1.0, z);
            rec = std::max(rec, std::abs(lhs - 2.0 * a / z * specfun::bessel_J(a, z)));
        }
    out.push_back(make_check("specfun.bessel_J_recurrence", rec, 1e-9));
}

void equilibrium_checks(std::vector<Check>& out, const std::optional<ModelConfig>& model) {
    const auto eq = equilibrium::solve_equilibrium(Polynomial({0.0, 1.0}));
    const auto rep = equilibrium::check_equilibrium(eq);
    out.push_back(make_check("equilibrium.linear.a", std::abs(eq.a - 4.0), 1e-8));
    out.push_back(make_check("equilibrium.linear.kappa0", std::abs(eq.kappa0 - 1.0 / std::numbers::pi), 1e-8));
    out.push_back(make_check("equilibrium.linear.c_V", std::abs(eq.c_V - 1.0), 1e-8));
    out.push_back(make_check("equilibrium.linear.mass", rep.mass_defect, 1e-10));
    out.push_back(make_check("equilibrium.linear.euler_lagrange", rep.euler_lagrange_sup, 1e-7));
    std::vector<Polynomial> others{Polynomial({0.0, 0.0, 0.5})};
    if (model) others.push_back(model->V);
    for (std::size_t i = 0; i < others.size(); ++i) {
        const auto e = equilibrium::solve_equilibrium(others[i]);
        const auto r = equilibrium::check_equilibrium(e);
        const std::string p = "equilibrium.V" + std::to_string(i + 1);
        out.push_back(make_check(p + ".mass", r.mass_defect, 1e-10));
        out.push_back(make_check(p + ".euler_lagrange", r.euler_lagrange_sup, 1e-7));
        out.push_back(make_check(p + ".outside_strict", r.outside_margin > 0.0 ? 0.0 : 1.0, 0.0));
        out.push_back(make_check(p + ".psi_limit", r.psi_limit_defect, 1e-6));
    }
}

void parametrix_checks(std::vector<Check>& out, const std::vector<double>& alphas) {
    using namespace parametrix;
    for (double a : alphas) {
        std::ostringstream tag;
        tag << "parametrix.alpha=" << a;
        const std::string p = tag.str();
        for (auto [ray, name] : {std::pair{Ray::Gamma0, "Gamma0"}, std::pair{Ray::GammaPlus, "GammaPlus"},
                                 std::pair{Ray::GammaMinus, "GammaMinus"}}) {
            double worst = 0.0;
            for (int i = 0; i < 10; ++i) worst = std::max(worst, jump_residual(a, ray, 0.1 * std::pow(100.0, i / 9.0)));
            out.push_back(make_check(p + ".jump." + name, worst, 1e-9));
        }
        double det = 0.0;
        for (double arg : {0.0, 2.4, -2.4})
            for (int i = 0; i < 20; ++i)
                det = std::max(det, det_residual(a, std::polar(0.05 + 0.45 * i, arg + 0.01 * (i % 5) - 0.02)));
        out.push_back(make_check(p + ".det", det, 1e-10));
        const Matrix2C pub = value_at_zero(a), numv = value_at_zero_numeric(a);
        out.push_back(make_check(p + ".value_at_zero", (pub - numv).cwiseAbs().maxCoeff(), 1e-10,
                                 "published closed form vs limit of the analytic factor"));
        const auto am = asymptotic_match(a, 1000.0);
        out.push_back(make_check(p + ".psi1_12", am.coefficient_error_12, 1e-4));
        out.push_back(make_check(p + ".psi1_matrix", am.coefficient_error, 1e-4));
        out.push_back(make_check(p + ".column1_identity", column1_identity_residual(a), 1e-9));
    }
}

void global_parametrix_checks(std::vector<Check>& out) {
    for (int m : {1, 2}) {
        ModelConfig cfg;
        cfg.V = Polynomial({0.0, 1.0});
        std::vector<double> q(m + 1, 0.0);
        q[m] = 1.0;
        cfg.Q = Polynomial(q);
        cfg.m = m;
        cfg.t = 1.0;
        cfg.s = 1.0;
        const auto eq = equilibrium::solve_equilibrium(cfg.V);
        std::vector<double> ln, lr;
        for (int n : {20, 40, 80}) {
            const auto c = cfg.with_n(n);
            const double r = std::abs(n * equilibrium::p0_global_parametrix(c, eq) - equilibrium::p_infinity(c, eq));
            ln.push_back(std::log(double(n)));
            lr.push_back(std::log(r));
        }
        const double slope = fit_slope(ln, lr);
        out.push_back(make_check("global_parametrix.m=" + std::to_string(m) + ".rate_exponent",
                                 std::abs(slope + 2.0 * m), 0.5,
                                 "value is |fitted exponent + 2m|; fitted exponent " + fmt17(slope)));
    }
}

void nonlocal_checks(std::vector<Check>& out) {
    const double pred = 0.1 * std::log(2.0) / 2.0;
    const auto c = nonlocal::small_x_expansion_check(0.0, 1, 0.0, 0.1);
    out.push_back(make_check("nonlocal.correction_x=0.1", std::abs(c.numeric - pred) / pred, 0.02));
    std::vector<double> lx, le;
    for (double x : {0.05, 0.1, 0.2}) {
        lx.push_back(std::log(x));
        le.push_back(std::log(nonlocal::small_x_expansion_check(0.0, 1, 0.0, x).rel_err));
    }
    const double slope = fit_slope(lx, le);
    out.push_back(make_check("nonlocal.error_exponent", std::abs(slope - 2.0), 0.4,
                             "value is |fitted exponent - 2|; fitted exponent " + fmt17(slope)));
    double ode = 0.0;
    for (double a : {0.0, 0.5, 1.3})
        for (double z : {1.0, 4.0, -2.0})
            for (double x : {0.05, 0.1, 0.3}) ode = std::max(ode, nonlocal::bessel_ode_residual(a, z, x));
    out.push_back(make_check("nonlocal.bessel_ode", ode, 1e-8));
    out.push_back(make_check("nonlocal.schroedinger_s=0", nonlocal::schroedinger_residual(0.0, 1.0, 0.0, 0.1), 5e-2));
    out.push_back(make_check("nonlocal.schroedinger_s=30", nonlocal::schroedinger_residual(0.0, 1.0, 30.0, 0.1), 1e-3));
}

void limit_checks(std::vector<Check>& out) {
    for (auto [a, s] : {std::pair{0.0, 0.0}, std::pair{0.5, 1.0}}) {
        const auto sc = bessel::scale_from_x(1.0, 1);
        const double d = bessel::log_statistic_fredholm(a, sc, 1, s);
        const double t = bessel::log_statistic_trace(a, sc, 1, s);
        std::ostringstream name;
        name << "bessel_limit.trace_vs_det.alpha=" << a << ".s=" << s;
        out.push_back(make_check(name.str(), std::abs(d - t), 1e-6));
    }
}

}  // namespace

int cmd_verify(const ExperimentSpec& spec) {
    std::vector<Check> checks;
    specfun_checks(checks);
    equilibrium_checks(checks, spec.model);
    parametrix_checks(checks, spec.parametrix_alphas);
    global_parametrix_checks(checks);
    nonlocal_checks(checks);
    limit_checks(checks);
    json arr = json::array();
    int failed = 0;
    for (const auto& c : checks) {
        arr.push_back(c.to_json());
        if (!c.passed) {
            ++failed;
            std::cout << "FAIL " << c.name << ": " << c.value << " > " << c.tolerance << '\n';
        }
    }
    write_json(spec, "verify_report.json", {{"checks", arr}, {"failed", failed}, {"total", checks.size()}});
    std::cout << "verify: " << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return failed == 0 ? kExitOk : kExitTolerance;
}

int cmd_mc(const ExperimentSpec& spec) {
    const ModelConfig& cfg0 = require_model(spec);
    if (!linear_unit_V(cfg0)) throw UsageError("mc supports V(x) = x only");
    const ModelConfig cfg = cfg0.with_n(spec.mc_n);
    const auto batch = mc::sample_batch(cfg.n, cfg.alpha, spec.mc_samples, spec.seed, spec.threads);
    if (spec.dump_raw) batch.write_binary((fs::path(spec.out_dir) / "eigenvalues.bin").string());

    const double n2 = double(cfg.n) * cfg.n;  // c_V = 1 for V(x) = x
    std::vector<double> s_list = spec.s_grid;
    std::ostringstream os;
    os << csv_header(spec) << "s,L_mean,L_stderr,ess\n";
    json per_s = json::array();
    for (double s : s_list) {
        const auto e = mc::estimate_L(batch, cfg.with_s(s));
        os << num(s) << ',' << num(e.mean) << ',' << num(e.stderr_) << ',' << num(e.ess) << '\n';
        json row{{"s", s}, {"L", e.to_json()}};
        json counts = json::array();
        for (double u : spec.u_grid) {
            const double cut = u / n2;
            const auto c = mc::conditional_observable(batch, cfg.with_s(s), [cut](double x) { return x <= cut ? 1.0 : 0.0; });
            counts.push_back({{"u", u}, {"count", c.to_json()}});
        }
        row["hard_edge_counts"] = counts;
        per_s.push_back(row);
    }
    write_file(spec, "mc.csv", os.str());
    write_json(spec, "mc_summary.json",
               {{"seed", spec.seed}, {"n", cfg.n}, {"N", spec.mc_samples}, {"alpha", cfg.alpha}, {"estimates", per_s}});
    std::cout << "mc: " << spec.mc_samples << " samples of size " << cfg.n << '\n';
    return kExitOk;
}

int cmd_equilibrium(const ExperimentSpec& spec) {
    const ModelConfig& cfg = require_model(spec);
    const auto eq = equilibrium::solve_equilibrium(cfg.V);
    const auto rep = equilibrium::check_equilibrium(eq);
    const auto sc = scale_for(cfg, eq);
    std::ostringstream os;
    os << csv_header(spec) << "x,density,effective_potential\n";
    for (int i = 1; i < 200; ++i) {
        const double x = eq.a * i / 200.0;
        os << num(x) << ',' << num(eq.density(x)) << ',' << num(eq.effective_potential(x)) << '\n';
    }
    write_file(spec, "density.csv", os.str());
    json j = to_json(eq);
    j["report"] = {{"mass_defect", rep.mass_defect},
                   {"euler_lagrange_sup", rep.euler_lagrange_sup},
                   {"outside_margin", rep.outside_margin},
                   {"min_interior_density", rep.min_interior_density},
                   {"kappa0_closed_form", rep.kappa0_closed_form},
                   {"psi_limit_defect", rep.psi_limit_defect},
                   {"pass", rep.passed()}};
    j["scale"] = {{"x_param", sc.x_param}, {"u_param", sc.u_param}, {"c_V", sc.c_V}};
    write_json(spec, "equilibrium.json", j);
    std::cout << "equilibrium: a = " << fmt17(eq.a) << ", c_V = " << fmt17(eq.c_V) << '\n';
    return rep.passed() ? kExitOk : kExitTolerance;
}

int run(int argc, char** argv) {
    CLI::App app{"Hard-edge statistics of conditionally thinned Laguerre-type ensembles"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    int threads = 0;
    std::optional<std::uint64_t> seed;
    for (const char* name : {"kernel", "statistic", "verify", "mc", "equilibrium"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON experiment config")->required(std::string(name) != "verify");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads (default: HARDEDGE_THREADS or all cores)");
        sub->add_option("--seed", seed, "override the Monte-Carlo seed");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        json config = json::object();
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw UsageError("cannot open config " + config_path);
            try {
                config = json::parse(is);
            } catch (const json::parse_error& e) {
                throw UsageError(std::string("config parse error: ") + e.what());
            }
        }
        ExperimentSpec spec = parse_spec(command, config);
        if (seed) spec.seed = *seed;
        spec.out_dir = out_dir;
        spec.threads = parallel::resolve_threads(threads);
        fs::create_directories(spec.out_dir);
        write_file(spec, "config.json", spec.raw.dump(2) + "\n");
        if (command == "kernel") return cmd_kernel(spec);
        if (command == "statistic") return cmd_statistic(spec);
        if (command == "verify") return cmd_verify(spec);
        if (command == "mc") return cmd_mc(spec);
        return cmd_equilibrium(spec);
    } catch (const std::exception& e) {
        std::cerr << "hardedge " << command << ": " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace hardedge::cli
