#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardedge/symbols.hpp"

namespace hardedge {

/// Eigenvalue samples of the classical ensemble with weight x^alpha e^{-nx}.
struct SampleBatch {
    std::uint64_t seed = 0;
    int n = 0;
    int N = 0;
    double alpha = 0.0;
    std::vector<double> eigenvalues;  ///< N rows of n ascending values

    const double* sample(int i) const { return eigenvalues.data() + static_cast<std::size_t>(i) * n; }
    /// Per-sample weights prod_j sigma_n(x_j | s).
    std::vector<double> weights(const ModelConfig& cfg) const;
    /// Raw float64 rows, native byte order.
    void write_binary(const std::string& path) const;
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double ess = 0.0;
    std::string warning;
    nlohmann::json to_json() const;
};

namespace mc {

/// Independent stream for sample i of a batch.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index);
/// chi_k for real k > 0.
double chi(double k, std::mt19937_64& rng);

/// Eigenvalues of B B^T / (2n), B the bidiagonal chi model with exponent alpha.
std::vector<double> sample_laguerre(int n, double alpha, std::mt19937_64& rng);
std::vector<double> sample_laguerre(int n, double alpha, std::uint64_t seed);

SampleBatch sample_batch(int n, double alpha, int N, std::uint64_t seed, int threads = 1);

/// Plain Monte-Carlo mean of prod sigma_n(x_j | s); requires V(x) = x.
Estimate estimate_L(const SampleBatch& batch, const ModelConfig& cfg);

/// E[w sum_j f(x_j)] / E[w], jackknife standard error; warns when ESS < 100.
Estimate conditional_observable(const SampleBatch& batch, const ModelConfig& cfg,
                                const std::function<double(double)>& f);

/// Unweighted mean of sum_j f(x_j).
Estimate plain_observable(const SampleBatch& batch, const std::function<double(double)>& f);

}  // namespace mc
}  // namespace hardedge
