// Serial reference vs OpenMP kernels: Monte Carlo cells and tuple enumeration.
// Prints wall time for each path and whether the results agree bit for bit.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "ztpgini/montecarlo.hpp"
#include "ztpgini/oracle.hpp"

using namespace ztpgini;

namespace {

template <typename F>
double time_it(F&& f) {
    const double start = omp_get_wtime();
    f();
    return omp_get_wtime() - start;
}

bool same_cell(const mc::SimCellSummary& a, const mc::SimCellSummary& b) {
    return std::memcmp(&a.mean_g_hat, &b.mean_g_hat, sizeof(double)) == 0 &&
           std::memcmp(&a.mean_g_bc, &b.mean_g_bc, sizeof(double)) == 0 && a.mse_std == b.mse_std &&
           a.mse_bc == b.mse_bc && a.degenerate_count == b.degenerate_count;
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 20000;
    std::printf("threads available: %d\n", omp_get_max_threads());
    std::printf("%-28s %10s %10s %8s %s\n", "kernel", "serial_s", "omp_s", "speedup", "identical");

    for (auto [lambda, n] : {std::pair{1.0, 5}, std::pair{2.0, 50}}) {
        mc::SimCellSummary serial, parallel;
        const double ts = time_it([&] { serial = mc::run_cell_serial(lambda, n, reps, 7); });
        const double tp = time_it([&] { parallel = mc::run_cell(lambda, n, reps, 7); });
        char label[64];
        std::snprintf(label, sizeof label, "run_cell(l=%g,n=%d)", lambda, n);
        std::printf("%-28s %10.4f %10.4f %8.2f %s\n", label, ts, tp, ts / tp, same_cell(serial, parallel) ? "yes" : "NO");
    }

    for (auto [lambda, n] : {std::pair{2.0, 3}, std::pair{1.0, 4}}) {
        const ZtpParams params(lambda);
        const int kmax = oracle::default_kmax(params);
        double a = 0.0, b = 0.0;
        const double ts = time_it([&] { a = oracle::expected_gini_enumeration(params, n, kmax, true, false); });
        const double tp = time_it([&] { b = oracle::expected_gini_enumeration(params, n, kmax, true, true); });
        char label[64];
        std::snprintf(label, sizeof label, "enumeration(l=%g,n=%d)", lambda, n);
        std::printf("%-28s %10.4f %10.4f %8.2f %s\n", label, ts, tp, ts / tp, a == b ? "yes" : "NO");
    }
    return 0;
}
