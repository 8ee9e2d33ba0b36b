#include "ztpgini/gini.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ztpgini/specfun.hpp"

namespace ztpgini::gini {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_n(int n) {
    if (n < 2) throw std::domain_error("sample size n must be >= 2");
}

double log_norm(double lambda) { return std::log(-std::expm1(-lambda)); }

// (n - 2) ln(exp(lambda y) - 1); the y -> 0 limit of the power is 0 for n > 2.
double log_bracket_power(double lambda, double y, int n) {
    if (n == 2) return 0.0;
    if (y < 1e-300) return kNegInf;
    return (n - 2) * log_expm1(lambda * y);
}

double log_scaled_bessel(int order, double z) {
    const double v = specfun::bessel_i_scaled(order, z);
    return v > 0.0 ? std::log(v) : kNegInf;
}

// ln(I_0(z) + I_1(z) - exp(z/2)). The difference is O(z^2) near 0, so for
// moderate z it is summed term by term:
//   sum_{m>=2} (z/2)^m [1/(floor(m/2)! ceil(m/2)!) - 1/m!],
// where every bracket is positive.
double log_bessel_excess(double z) {
    if (z <= 0.0) return kNegInf;
    if (z > 15.0) {
        const double scaled = specfun::bessel_i_scaled(0, z) + specfun::bessel_i_scaled(1, z) - std::exp(-0.5 * z);
        return std::log(scaled) + z;
    }
    const double h = 0.5 * z;
    double bessel_term = h;  // m = 1
    double exp_term = h;
    double sum = 0.0;
    for (int m = 2; m < 400; ++m) {
        bessel_term *= h / static_cast<double>((m + 1) / 2);
        exp_term *= h / static_cast<double>(m);
        const double term = bessel_term - exp_term;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::log(sum);
}

double finite_or_zero(double log_value) { return log_value == kNegInf ? 0.0 : std::exp(log_value); }

}  // namespace

double gini_sample(std::span<const std::int64_t> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::domain_error("gini_sample: n must be >= 2");
    std::vector<std::int64_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::int64_t pair_sum = 0;
    std::int64_t total = 0;
    const auto nn = static_cast<std::int64_t>(n);
    for (std::int64_t i = 1; i <= nn; ++i) {
        const std::int64_t x = sorted[static_cast<std::size_t>(i - 1)];
        if (x < 1) throw std::domain_error("gini_sample: values must be >= 1");
        pair_sum += (2 * i - nn - 1) * x;
        total += x;
    }
    return static_cast<double>(pair_sum) / (static_cast<double>(nn - 1) * static_cast<double>(total));
}

double gini_sample(const Sample& sample) { return gini_sample(sample.values()); }

namespace {

// exp(-lambda) / (1 - exp(-lambda)) * int_0^lambda I_0(2 sqrt(lambda t)) exp(-t) dt
double scaled_bessel_integral(double lambda, const QuadSpec& spec) {
    auto integrand = [lambda](double t) {
        const double z = 2.0 * std::sqrt(lambda * t);
        return specfun::bessel_i_scaled(0, z) * std::exp(z - t - lambda);
    };
    return integrate(integrand, 0.0, lambda, spec) / -std::expm1(-lambda);
}

}  // namespace

double prob_equal(const ZtpParams& params) {
    const double lambda = params.lambda();
    return specfun::bessel_i_scaled(1, 2.0 * lambda) / -std::expm1(-lambda);
}

double prob_less(const ZtpParams& params, const QuadSpec& spec) {
    return 1.0 - scaled_bessel_integral(params.lambda(), spec);
}

double gini_population(const ZtpParams& params, const QuadSpec& spec) {
    const double lambda = params.lambda();
    const double g = 1.0 - 2.0 * scaled_bessel_integral(lambda, spec) + prob_equal(params);
    // Rounding of the O(1) terms can leave a tiny negative value as lambda -> 0.
    return std::max(g, 0.0);
}

double r_infinity(const ZtpParams& params, int n) {
    require_n(n);
    const double lambda = params.lambda();
    return -std::expm1(-lambda) / (n * lambda);
}

double r1(const ZtpParams& params, int n, const QuadSpec& spec) {
    require_n(n);
    const double lambda = params.lambda();
    const double log_prefactor = -n * lambda - (n - 1) * log_norm(lambda) - std::log(2.0);
    auto integrand = [=](double y) {
        const double z = 2.0 * lambda * y;
        return finite_or_zero(log_prefactor + log_scaled_bessel(0, z) + z + log_bracket_power(lambda, y, n));
    };
    const double integral = integrate(integrand, 0.0, 1.0, spec);
    const double e = std::exp(-lambda);
    return integral + (e + n - 1) / (2.0 * n * (n - 1) * lambda) - e / ((n - 1) * lambda);
}

double expected_g_diag(const ZtpParams& params, int n, const QuadSpec& spec) {
    require_n(n);
    const double lambda = params.lambda();
    const double log_prefactor = -n * lambda - (n - 1) * log_norm(lambda);
    auto integrand = [=](double y) {
        const double z = 2.0 * lambda * y;
        return finite_or_zero(log_prefactor + log_scaled_bessel(1, z) + z + log_bracket_power(lambda, y, n));
    };
    return integrate(integrand, 0.0, 1.0, spec);
}

// The constant n e^{-lambda} / ((n-1)(1-e^{-lambda})) equals the same
// prefactor times int_0^1 e^{lambda y} (e^{lambda y} - 1)^{n-2} dy, so it is
// folded into the integrand as -exp(lambda y) and the cancellation is done
// analytically by log_bessel_excess.
double expected_gini(const ZtpParams& params, int n, const QuadSpec& spec) {
    require_n(n);
    const double lambda = params.lambda();
    const double log_prefactor = std::log(n * lambda) - n * lambda - n * log_norm(lambda);
    auto integrand = [=](double y) {
        return finite_or_zero(log_prefactor + log_bessel_excess(2.0 * lambda * y) + log_bracket_power(lambda, y, n));
    };
    return integrate(integrand, 0.0, 1.0, spec);
}

double bias(const ZtpParams& params, int n, const QuadSpec& spec) {
    return expected_gini(params, n, spec) - gini_population(params, spec);
}

double bias_merged(const ZtpParams& params, int n, const QuadSpec& spec) {
    require_n(n);
    const double lambda = params.lambda();
    const double c = -std::expm1(-lambda);
    const double log_prefactor = std::log(n * lambda) - n * lambda - n * std::log(c);
    auto integrand = [=](double y) {
        const double z = 2.0 * lambda * y;
        const double bessel_sum = specfun::bessel_i_scaled(0, z) + specfun::bessel_i_scaled(1, z);
        return finite_or_zero(log_prefactor + std::log(bessel_sum) + z + log_bracket_power(lambda, y, n));
    };
    const double e = std::exp(-lambda);
    const double integral_t = integrate(
        [lambda](double t) {
            const double z = 2.0 * std::sqrt(lambda * t);
            return specfun::bessel_i_scaled(0, z) * std::exp(z - t);
        },
        0.0, lambda, spec);
    return integrate(integrand, 0.0, 1.0, spec) - n * e / ((n - 1) * c) + 2.0 * e / c * integral_t -
           specfun::bessel_i_scaled(1, 2.0 * lambda) / c - 1.0;
}

GiniReport estimate(const Sample& sample, const QuadSpec& spec) {
    GiniReport report;
    report.n = sample.size();
    report.g_hat = gini_sample(sample);
    const auto fit = ztp::mle(sample);
    report.lambda_hat = fit.lambda_hat;
    report.lambda_degenerate = fit.degenerate;
    report.bias_hat = bias(ZtpParams(fit.lambda_hat), static_cast<int>(sample.size()), spec);
    report.g_hat_bc = report.g_hat - report.bias_hat;
    return report;
}

}  // namespace ztpgini::gini
