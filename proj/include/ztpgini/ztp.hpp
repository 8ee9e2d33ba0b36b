#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ztpgini/rng.hpp"

namespace ztpgini {

/// Rate of the untruncated parent Poisson; always positive and finite.
class ZtpParams {
public:
    explicit ZtpParams(double lambda);
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

/// Observed counts. Enforces n >= 2 and every value >= 1.
class Sample {
public:
    explicit Sample(std::vector<std::int64_t> values);

    std::span<const std::int64_t> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::int64_t sum() const noexcept { return sum_; }
    double mean() const noexcept { return static_cast<double>(sum_) / static_cast<double>(values_.size()); }

private:
    std::vector<std::int64_t> values_;
    std::int64_t sum_ = 0;
};

namespace ztp {

double log_pmf(const ZtpParams& params, std::int64_t k);
double pmf(const ZtpParams& params, std::int64_t k);

/// F(x) = 1 - P(floor(x) + 1, lambda) / (1 - exp(-lambda)); zero below 1.
double cdf(const ZtpParams& params, double x);

/// lambda / (1 - exp(-lambda)), with a series below lambda = 1e-6.
double mean(const ZtpParams& params);
double mean_of_rate(double lambda);

/// Law of the size-biased companion X*: a Poisson shifted up by one.
double size_biased_pmf(const ZtpParams& params, std::int64_t k);

/// sum_k exp(-x k) P(k) in closed form.
double laplace_transform(const ZtpParams& params, double x);

/// Partial Laplace sum over k < xstar, via the upper incomplete gamma.
double h_function(const ZtpParams& params, double x, std::int64_t xstar);

/// Last index of a series over k: pmf term below 1e-16 and k past
/// lambda + 10 sqrt(lambda) + 20.
std::int64_t series_cutoff(const ZtpParams& params);

/// n iid draws by sequential inverse-CDF search from k = 1.
std::vector<std::int64_t> sample(const ZtpParams& params, std::size_t n, Engine& engine);

struct MleResult {
    double lambda_hat = 0.0;
    bool degenerate = false;
};

inline constexpr double kLambdaFloor = 1e-8;

/// Solves mean_of_rate(lambda) = xbar. Samples with xbar <= 1 + 1e-12 sit on
/// the boundary; they return kLambdaFloor with the degenerate flag set.
MleResult mle_from_mean(double xbar);
MleResult mle(const Sample& sample);

}  // namespace ztp

/// ln(exp(x) - 1) for x > 0 without overflow.
double log_expm1(double x);

}  // namespace ztpgini
