#include "ztpgini/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ztpgini/gini.hpp"
#include "ztpgini/rng.hpp"
#include "ztpgini/ztp.hpp"

namespace ztpgini::mc {

namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// Runs body(i) for i in [0, count). Exceptions are captured per index and the
// lowest-index one is rethrown, so failures are as deterministic as results.
template <typename Body>
void for_each_index(std::size_t count, bool parallel, int threads, Body&& body) {
    std::vector<std::exception_ptr> errors(count);
    const auto signed_count = static_cast<std::int64_t>(count);
    if (parallel) {
        const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(team)
        for (std::int64_t i = 0; i < signed_count; ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (std::int64_t i = 0; i < signed_count; ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void check_cell_args(double lambda, int n, int reps) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
}

struct Draw {
    double g_hat;
    std::int64_t sum;
};

std::vector<Replication> replicate(double lambda, int n, int reps, std::uint64_t seed, const QuadSpec& quad,
                                   bool parallel, int threads) {
    check_cell_args(lambda, n, reps);
    const ZtpParams params(lambda);
    const auto count = static_cast<std::size_t>(reps);

    std::vector<Draw> draws(count);
    for_each_index(count, parallel, threads, [&](std::size_t rep) {
        Engine engine(replication_seed(seed, rep));
        const auto values = ztp::sample(params, static_cast<std::size_t>(n), engine);
        std::int64_t sum = 0;
        for (auto v : values) sum += v;
        draws[rep] = {gini::gini_sample(values), sum};
    });

    // lambda_hat depends on the sample only through its sum, so the plug-in
    // bias is evaluated once per distinct sum.
    std::vector<std::int64_t> sums;
    sums.reserve(count);
    for (const auto& d : draws) sums.push_back(d.sum);
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

    std::vector<double> bias_by_sum(sums.size());
    std::vector<char> degenerate_by_sum(sums.size());
    for_each_index(sums.size(), parallel, threads, [&](std::size_t i) {
        const double xbar = static_cast<double>(sums[i]) / static_cast<double>(n);
        const auto fit = ztp::mle_from_mean(xbar);
        bias_by_sum[i] = gini::bias(ZtpParams(fit.lambda_hat), n, quad);
        degenerate_by_sum[i] = fit.degenerate ? 1 : 0;
    });

    std::vector<Replication> out(count);
    for (std::size_t rep = 0; rep < count; ++rep) {
        const auto idx = static_cast<std::size_t>(std::lower_bound(sums.begin(), sums.end(), draws[rep].sum) - sums.begin());
        out[rep] = {draws[rep].g_hat, draws[rep].g_hat - bias_by_sum[idx], degenerate_by_sum[idx] != 0};
    }
    return out;
}

SimCellSummary summarize(double lambda, int n, std::uint64_t seed, const std::vector<Replication>& reps,
                         const QuadSpec& quad) {
    SimCellSummary s;
    s.lambda = lambda;
    s.n = n;
    s.reps = static_cast<int>(reps.size());
    s.cell_seed = seed;
    s.true_g = gini::gini_population(ZtpParams(lambda), quad);

    std::vector<double> g_hat;
    std::vector<double> g_bc;
    g_hat.reserve(reps.size());
    g_bc.reserve(reps.size());
    for (const auto& r : reps) {
        g_hat.push_back(r.g_hat);
        g_bc.push_back(r.g_bc);
        if (r.degenerate) ++s.degenerate_count;
    }
    s.mean_g_hat = mean_of(g_hat);
    s.mean_g_bc = mean_of(g_bc);
    s.rel_bias_std = relative_bias(g_hat, s.true_g);
    s.rel_bias_bc = relative_bias(g_bc, s.true_g);
    s.mse_std = mse(g_hat, s.true_g);
    s.mse_bc = mse(g_bc, s.true_g);
    s.sd_g_hat = std::sqrt(mse(g_hat, s.mean_g_hat));
    s.sd_g_bc = std::sqrt(mse(g_bc, s.mean_g_bc));
    return s;
}

}  // namespace

void SimConfig::validate() const {
    if (lambdas.empty() || ns.empty()) throw std::invalid_argument("simulation grid must not be empty");
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("every lambda must be positive and finite");
    }
    for (int n : ns) {
        if (n < 2) throw std::invalid_argument("every n must be >= 2");
    }
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    quad.validate();
}

double relative_bias(std::span<const double> estimates, double true_g) {
    if (estimates.empty()) throw std::domain_error("relative_bias: no estimates");
    if (!(true_g > 0.0)) throw std::domain_error("relative_bias: true_g must be > 0");
    return std::abs(mean_of(estimates) - true_g) / true_g;
}

double mse(std::span<const double> estimates, double true_g) {
    if (estimates.empty()) throw std::domain_error("mse: no estimates");
    double sum = 0.0;
    for (double e : estimates) sum += (e - true_g) * (e - true_g);
    return sum / static_cast<double>(estimates.size());
}

std::uint64_t replication_seed(std::uint64_t cell_seed, std::uint64_t rep) { return derive_seed(cell_seed, rep); }

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t lambda_index, std::size_t n_index) {
    return derive_seed(master_seed, lambda_index + 1, n_index + 1);
}

std::vector<Replication> replicate_cell(double lambda, int n, int reps, std::uint64_t seed, const QuadSpec& quad,
                                        int threads) {
    return replicate(lambda, n, reps, seed, quad, true, threads);
}

SimCellSummary run_cell(double lambda, int n, int reps, std::uint64_t seed, const QuadSpec& quad, int threads) {
    return summarize(lambda, n, seed, replicate(lambda, n, reps, seed, quad, true, threads), quad);
}

SimCellSummary run_cell_serial(double lambda, int n, int reps, std::uint64_t seed, const QuadSpec& quad) {
    return summarize(lambda, n, seed, replicate(lambda, n, reps, seed, quad, false, 1), quad);
}

std::vector<SimCellSummary> run_simulation(const SimConfig& config, const ProgressSink& progress) {
    config.validate();
    std::vector<SimCellSummary> out;
    out.reserve(config.lambdas.size() * config.ns.size());
    const std::size_t total = config.lambdas.size() * config.ns.size();
    for (std::size_t li = 0; li < config.lambdas.size(); ++li) {
        for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
            const double lambda = config.lambdas[li];
            const int n = config.ns[ni];
            const auto seed = cell_seed(config.master_seed, li, ni);
            SimCellSummary cell;
            try {
                cell = run_cell(lambda, n, config.reps, seed, config.quad, config.threads);
            } catch (const std::exception& e) {
                cell = SimCellSummary{};
                cell.lambda = lambda;
                cell.n = n;
                cell.reps = config.reps;
                cell.cell_seed = seed;
                std::ostringstream os;
                os << "cell lambda=" << lambda << " n=" << n << ": " << e.what();
                cell.failure = os.str();
            }
            out.push_back(cell);
            if (progress) progress(out.back(), out.size(), total);
        }
    }
    return out;
}

}  // namespace ztpgini::mc
