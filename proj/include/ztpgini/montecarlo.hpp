#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ztpgini/quadrature.hpp"

namespace ztpgini::mc {

struct SimConfig {
    std::vector<double> lambdas = {0.1, 0.5, 1.0, 2.0};
    std::vector<int> ns = {5, 10, 30, 50};
    int reps = 1000;
    std::uint64_t master_seed = 12345;
    QuadSpec quad{};
    /// OpenMP threads; 0 keeps the runtime default. Results do not depend on it.
    int threads = 0;

    void validate() const;
};

struct SimCellSummary {
    double lambda = 0.0;
    int n = 0;
    int reps = 0;
    std::uint64_t cell_seed = 0;
    double true_g = 0.0;
    double mean_g_hat = 0.0;
    double mean_g_bc = 0.0;
    double rel_bias_std = 0.0;
    double rel_bias_bc = 0.0;
    double mse_std = 0.0;
    double mse_bc = 0.0;
    /// Population standard deviations of the per-replication estimates.
    double sd_g_hat = 0.0;
    double sd_g_bc = 0.0;
    int degenerate_count = 0;
    /// Empty on success; otherwise the diagnostic that aborted the cell.
    std::string failure;

    bool ok() const noexcept { return failure.empty(); }
};

/// Estimates from one replication.
struct Replication {
    double g_hat = 0.0;
    double g_bc = 0.0;
    bool degenerate = false;
};

/// |mean(estimates) - true_g| / true_g
double relative_bias(std::span<const double> estimates, double true_g);

/// mean of (estimate - true_g)^2
double mse(std::span<const double> estimates, double true_g);

/// Seed of replication `rep` inside a cell.
std::uint64_t replication_seed(std::uint64_t cell_seed, std::uint64_t rep);

/// Seed of grid cell (lambda_index, n_index).
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t lambda_index, std::size_t n_index);

/// One cell of the study: `reps` samples of size n from ZTP(lambda), both
/// estimators per sample, and the summary. Replications run under OpenMP;
/// results are stored per replication and reduced in replication order, so
/// the output is bit-identical for every thread count.
SimCellSummary run_cell(double lambda, int n, int reps, std::uint64_t cell_seed, const QuadSpec& quad = {},
                        int threads = 0);

/// Single-threaded reference for run_cell; same output bit for bit.
SimCellSummary run_cell_serial(double lambda, int n, int reps, std::uint64_t cell_seed, const QuadSpec& quad = {});

/// Per-replication estimates behind a cell, in replication order.
std::vector<Replication> replicate_cell(double lambda, int n, int reps, std::uint64_t cell_seed,
                                        const QuadSpec& quad = {}, int threads = 0);

using ProgressSink = std::function<void(const SimCellSummary&, std::size_t done, std::size_t total)>;

/// Every (lambda, n) cell in row-major order (lambda outer). A failing cell is
/// reported through its `failure` field and does not stop the others.
std::vector<SimCellSummary> run_simulation(const SimConfig& config, const ProgressSink& progress = {});

}  // namespace ztpgini::mc
