#include "hardedge/mc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hardedge/errors.hpp"
#include "hardedge/parallel.hpp"

extern "C" void dlasq1_(int* n, double* d, double* e, double* work, int* info);

namespace hardedge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool is_linear_unit(const Polynomial& V) {
    Polynomial v = V;
    v.trim();
    return v.c.size() == 2 && v.c[0] == 0.0 && v.c[1] == 1.0;
}

}  // namespace

std::vector<double> SampleBatch::weights(const ModelConfig& cfg) const {
    std::vector<double> w(N, 1.0);
    if (cfg.s_infinite) return w;
    for (int i = 0; i < N; ++i) {
        double lw = 0.0;
        const double* x = sample(i);
        for (int j = 0; j < n; ++j) lw += symbols::log_sigma_n(cfg, x[j], cfg.s);
        w[i] = std::exp(lw);
    }
    return w;
}

void SampleBatch::write_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw NumericalError("cannot open " + path);
    os.write(reinterpret_cast<const char*>(eigenvalues.data()),
             static_cast<std::streamsize>(eigenvalues.size() * sizeof(double)));
}

nlohmann::json Estimate::to_json() const {
    nlohmann::json j{{"mean", mean}, {"stderr", stderr_}, {"ess", ess}};
    if (!warning.empty()) j["warning"] = warning;
    return j;
}

namespace mc {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double chi(double k, std::mt19937_64& rng) {
    if (!(k > 0.0)) throw DomainError("chi degrees of freedom must be positive");
    std::gamma_distribution<double> g(0.5 * k, 2.0);
    return std::sqrt(g(rng));
}

std::vector<double> sample_laguerre(int n, double alpha, std::mt19937_64& rng) {
    if (n < 1) throw DomainError("n must be positive");
    if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
    std::vector<double> d(n), e(std::max(n - 1, 0));
    for (int i = 1; i <= n; ++i) {
        d[i - 1] = chi(2.0 * (alpha + n - i + 1), rng);
        if (i < n) e[i - 1] = chi(2.0 * (n - i), rng);
    }
    // Singular values of the bidiagonal B by dqds: high relative accuracy near the hard edge.
    std::vector<double> work(4 * n);
    int N = n, info = 0;
    if (n > 1) e.push_back(0.0);
    dlasq1_(&N, d.data(), e.data(), work.data(), &info);
    if (info != 0) throw NumericalError("bidiagonal singular value solver failed");
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = d[i] * d[i];
    for (double& x : ev) x /= 2.0 * n;
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> sample_laguerre(int n, double alpha, std::uint64_t seed) {
    auto rng = stream(seed, 0);
    return sample_laguerre(n, alpha, rng);
}

SampleBatch sample_batch(int n, double alpha, int N, std::uint64_t seed, int threads) {
    if (N < 1) throw DomainError("sample count must be positive");
    SampleBatch b;
    b.seed = seed;
    b.n = n;
    b.N = N;
    b.alpha = alpha;
    b.eigenvalues.resize(static_cast<std::size_t>(N) * n);
    parallel::parallel_for(N, threads, [&](std::size_t i) {
        auto rng = stream(seed, i);
        const auto ev = sample_laguerre(n, alpha, rng);
        std::copy(ev.begin(), ev.end(), b.eigenvalues.begin() + i * n);
    });
    return b;
}

Estimate estimate_L(const SampleBatch& batch, const ModelConfig& cfg) {
    if (!is_linear_unit(cfg.V)) throw DomainError("Monte-Carlo sampler supports V(x) = x only");
    if (cfg.n != batch.n || cfg.alpha != batch.alpha) throw DomainError("batch does not match config");
    Estimate e;
    const auto w = batch.weights(cfg);
    double sum = 0.0, sum2 = 0.0;
    for (double v : w) {
        sum += v;
        sum2 += v * v;
    }
    const double N = batch.N;
    e.mean = sum / N;
    const double var = N > 1 ? std::max(0.0, (sum2 - N * e.mean * e.mean) / (N - 1.0)) : 0.0;
    e.stderr_ = std::sqrt(var / N);
    e.ess = sum2 > 0.0 ? sum * sum / sum2 : 0.0;
    return e;
}

Estimate conditional_observable(const SampleBatch& batch, const ModelConfig& cfg,
                                const std::function<double(double)>& f) {
    if (!is_linear_unit(cfg.V)) throw DomainError("Monte-Carlo sampler supports V(x) = x only");
    const auto w = batch.weights(cfg);
    std::vector<double> g(batch.N);
    double sw = 0.0, swg = 0.0, sw2 = 0.0;
    for (int i = 0; i < batch.N; ++i) {
        double acc = 0.0;
        const double* x = batch.sample(i);
        for (int j = 0; j < batch.n; ++j) acc += f(x[j]);
        g[i] = acc;
        sw += w[i];
        swg += w[i] * acc;
        sw2 += w[i] * w[i];
    }
    Estimate e;
    e.mean = swg / sw;
    e.ess = sw * sw / sw2;
    // Delete-one jackknife of the ratio estimator.
    const double N = batch.N;
    if (batch.N > 1) {
        std::vector<double> loo(batch.N);
        double mean_loo = 0.0;
        for (int i = 0; i < batch.N; ++i) {
            const double den = sw - w[i];
            loo[i] = den > 0.0 ? (swg - w[i] * g[i]) / den : e.mean;
            mean_loo += loo[i];
        }
        mean_loo /= N;
        double acc = 0.0;
        for (double v : loo) acc += (v - mean_loo) * (v - mean_loo);
        e.stderr_ = std::sqrt((N - 1.0) / N * acc);
    }
    if (e.ess < 100.0) e.warning = "effective sample size below 100";
    return e;
}

Estimate plain_observable(const SampleBatch& batch, const std::function<double(double)>& f) {
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < batch.N; ++i) {
        double acc = 0.0;
        const double* x = batch.sample(i);
        for (int j = 0; j < batch.n; ++j) acc += f(x[j]);
        sum += acc;
        sum2 += acc * acc;
    }
    Estimate e;
    const double N = batch.N;
    e.mean = sum / N;
    e.stderr_ = N > 1 ? std::sqrt(std::max(0.0, (sum2 - N * e.mean * e.mean) / (N - 1.0)) / N) : 0.0;
    e.ess = N;
    return e;
}

}  // namespace mc
}  // namespace hardedge
