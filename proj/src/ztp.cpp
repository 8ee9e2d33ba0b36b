#include "ztpgini/ztp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ztpgini/specfun.hpp"

namespace ztpgini {

double log_expm1(double x) {
    if (x > 40.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

ZtpParams::ZtpParams(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("ZtpParams: lambda must be positive and finite");
    }
}

Sample::Sample(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("Sample: at least two observations are required");
    for (auto v : values_) {
        if (v < 1) throw std::invalid_argument("Sample: values must be >= 1, got " + std::to_string(v));
        sum_ += v;
    }
}

namespace ztp {

namespace {

// ln(1 - exp(-lambda))
double log_norm(double lambda) { return std::log(-std::expm1(-lambda)); }

void require_support(std::int64_t k, const char* what) {
    if (k < 1) throw std::domain_error(std::string(what) + ": k must be >= 1");
}

}  // namespace

double log_pmf(const ZtpParams& params, std::int64_t k) {
    require_support(k, "pmf");
    const double lambda = params.lambda();
    const double kd = static_cast<double>(k);
    return kd * std::log(lambda) - lambda - specfun::log_gamma(kd + 1.0) - log_norm(lambda);
}

double pmf(const ZtpParams& params, std::int64_t k) { return std::exp(log_pmf(params, k)); }

double cdf(const ZtpParams& params, double x) {
    if (std::isnan(x)) throw std::domain_error("cdf: x is NaN");
    if (x < 1.0) return 0.0;
    const double lambda = params.lambda();
    const double m = std::floor(x);
    if (m > 1e15) return 1.0;
    const double survival = specfun::reg_lower_gamma(m + 1.0, lambda) / -std::expm1(-lambda);
    return 1.0 - survival;
}

double mean_of_rate(double lambda) {
    if (lambda < 1e-6) return 1.0 + lambda / 2.0 + lambda * lambda / 12.0;
    return lambda / -std::expm1(-lambda);
}

double mean(const ZtpParams& params) { return mean_of_rate(params.lambda()); }

double size_biased_pmf(const ZtpParams& params, std::int64_t k) {
    require_support(k, "size_biased_pmf");
    const double lambda = params.lambda();
    const double km1 = static_cast<double>(k - 1);
    return std::exp(km1 * std::log(lambda) - lambda - specfun::log_gamma(km1 + 1.0));
}

double laplace_transform(const ZtpParams& params, double x) {
    if (!(x > 0.0)) throw std::domain_error("laplace_transform: x must be > 0");
    const double lambda = params.lambda();
    const double a = lambda * std::exp(-x);
    if (a == 0.0) return 0.0;
    // exp(-lambda) / (1 - exp(-lambda)) == 1 / expm1(lambda)
    return std::exp(log_expm1(a) - log_expm1(lambda));
}

double h_function(const ZtpParams& params, double x, std::int64_t xstar) {
    if (!(x > 0.0)) throw std::domain_error("h_function: x must be > 0");
    if (xstar < 1) throw std::domain_error("h_function: xstar must be >= 1");
    if (xstar == 1) return 0.0;
    const double lambda = params.lambda();
    const double a = lambda * std::exp(-x);
    const double s = static_cast<double>(xstar);
    // exp(a) Q(s, a) - 1 == exp(a) (Q(s, a) - exp(-a)). Written through P when
    // a is small so the leading 1 never has to cancel.
    const double inner = a < s + 1.0 ? -std::expm1(-a) - specfun::reg_lower_gamma(s, a)
                                     : specfun::reg_upper_gamma(s, a) - std::exp(-a);
    const double value = std::exp(a - log_expm1(lambda)) * inner;
    return value > 0.0 ? value : 0.0;
}

std::int64_t series_cutoff(const ZtpParams& params) {
    const double lambda = params.lambda();
    const auto floor_k = static_cast<std::int64_t>(std::ceil(lambda + 10.0 * std::sqrt(lambda) + 20.0));
    std::int64_t k = floor_k;
    while (log_pmf(params, k) >= std::log(1e-16)) ++k;
    return k;
}

std::vector<std::int64_t> sample(const ZtpParams& params, std::size_t n, Engine& engine) {
    const double lambda = params.lambda();
    const double p1 = (lambda < 1e-300) ? 1.0 : lambda / std::expm1(lambda);
    std::vector<std::int64_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform01(engine);
        std::int64_t k = 1;
        double p = p1;
        double cumulative = p1;
        while (u >= cumulative) {
            ++k;
            p *= lambda / static_cast<double>(k);
            const double next = cumulative + p;
            // Rounding can leave the running sum just short of 1.
            if (next == cumulative) break;
            cumulative = next;
        }
        out.push_back(k);
    }
    return out;
}

MleResult mle_from_mean(double xbar) {
    if (!std::isfinite(xbar) || xbar < 1.0) throw std::invalid_argument("mle: sample mean must be >= 1");
    if (xbar <= 1.0 + 1e-12) return {kLambdaFloor, true};

    double lo = kLambdaFloor;
    double hi = xbar * 51.0;
    if (mean_of_rate(lo) >= xbar) return {kLambdaFloor, false};
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mean_of_rate(mid) < xbar) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double lambda = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double c = -std::expm1(-lambda);
        const double slope = (c - lambda * std::exp(-lambda)) / (c * c);
        const double next = lambda - (mean_of_rate(lambda) - xbar) / slope;
        if (!(next > 0.0) || !std::isfinite(next)) break;
        if (std::abs(mean_of_rate(next) - xbar) >= std::abs(mean_of_rate(lambda) - xbar)) break;
        lambda = next;
    }
    return {lambda, false};
}

MleResult mle(const Sample& sample) { return mle_from_mean(sample.mean()); }

}  // namespace ztp
}  // namespace ztpgini
