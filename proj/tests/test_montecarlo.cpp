#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ztpgini/gini.hpp"
#include "ztpgini/montecarlo.hpp"

using namespace ztpgini;
using namespace ztpgini::mc;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_summary(const SimCellSummary& a, const SimCellSummary& b) {
    return a.lambda == b.lambda && a.n == b.n && a.reps == b.reps && a.cell_seed == b.cell_seed &&
           same_bits(a.true_g, b.true_g) && same_bits(a.mean_g_hat, b.mean_g_hat) &&
           same_bits(a.mean_g_bc, b.mean_g_bc) && same_bits(a.rel_bias_std, b.rel_bias_std) &&
           same_bits(a.rel_bias_bc, b.rel_bias_bc) && same_bits(a.mse_std, b.mse_std) &&
           same_bits(a.mse_bc, b.mse_bc) && same_bits(a.sd_g_hat, b.sd_g_hat) && same_bits(a.sd_g_bc, b.sd_g_bc) &&
           a.degenerate_count == b.degenerate_count && a.failure == b.failure;
}

}  // namespace

TEST_CASE("relative bias and mse") {
    const std::vector<double> exact = {0.25, 0.25, 0.25};
    CHECK(relative_bias(exact, 0.25) == 0.0);
    CHECK(mse(exact, 0.25) == 0.0);
    const std::vector<double> low = {0.23, 0.25};
    CHECK(std::abs(relative_bias(low, 0.25) - 0.04) < 1e-15);
    const std::vector<double> pair = {0.25 - 0.01, 0.25 + 0.01};
    CHECK(std::abs(mse(pair, 0.25) - 1e-4) < 1e-18);
    const std::vector<double> one = {0.3};
    CHECK(std::abs(relative_bias(one, 0.25) - 0.05 / 0.25) < 1e-15);
    CHECK(std::abs(mse(one, 0.25) - 0.0025) < 1e-15);
    CHECK_THROWS_AS(relative_bias({}, 0.25), std::domain_error);
    CHECK_THROWS_AS(mse({}, 0.25), std::domain_error);
}

TEST_CASE("config validation") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.reps = 0;
    CHECK_THROWS(c.validate());
    c = {};
    c.ns = {1};
    CHECK_THROWS(c.validate());
    c = {};
    c.lambdas = {-1.0};
    CHECK_THROWS(c.validate());
    c = {};
    c.lambdas.clear();
    CHECK_THROWS(c.validate());
}

TEST_CASE("seeds") {
    CHECK(cell_seed(1, 0, 0) != cell_seed(1, 0, 1));
    CHECK(cell_seed(1, 0, 1) != cell_seed(1, 1, 0));
    CHECK(cell_seed(1, 2, 3) == cell_seed(1, 2, 3));
    CHECK(replication_seed(9, 0) != replication_seed(9, 1));
}

TEST_CASE("single replication") {
    const auto reps = replicate_cell(1.0, 5, 1, 77);
    REQUIRE(reps.size() == 1);
    const auto s = run_cell(1.0, 5, 1, 77);
    CHECK(s.reps == 1);
    CHECK(s.mean_g_hat == reps[0].g_hat);
    CHECK(s.mean_g_bc == reps[0].g_bc);
    CHECK(std::abs(s.rel_bias_std - std::abs(reps[0].g_hat - s.true_g) / s.true_g) < 1e-15);
    CHECK(std::abs(s.mse_std - (reps[0].g_hat - s.true_g) * (reps[0].g_hat - s.true_g)) < 1e-15);
    CHECK(s.true_g == gini::gini_population(ZtpParams(1.0)));
}

TEST_CASE("determinism, serial reference and thread counts") {
    const auto a = run_cell(0.5, 10, 2000, 4242);
    const auto b = run_cell(0.5, 10, 2000, 4242);
    const auto serial = run_cell_serial(0.5, 10, 2000, 4242);
    const auto one = run_cell(0.5, 10, 2000, 4242, {}, 1);
    const auto four = run_cell(0.5, 10, 2000, 4242, {}, 4);
    CHECK(same_summary(a, b));
    CHECK(same_summary(a, serial));
    CHECK(same_summary(a, one));
    CHECK(same_summary(a, four));
    CHECK_FALSE(same_summary(a, run_cell(0.5, 10, 2000, 4243)));
}

TEST_CASE("summary fields are consistent with replications") {
    const double lambda = 1.0;
    const auto reps = replicate_cell(lambda, 10, 3000, 11);
    const auto s = run_cell(lambda, 10, 3000, 11);
    std::vector<double> g, bc;
    for (const auto& r : reps) {
        g.push_back(r.g_hat);
        bc.push_back(r.g_bc);
        const double bias = r.g_hat - r.g_bc;
        CHECK(std::isfinite(bias));
    }
    CHECK(std::abs(s.rel_bias_std - std::abs(s.mean_g_hat - s.true_g) / s.true_g) <= 1e-14);
    CHECK(std::abs(s.rel_bias_bc - std::abs(s.mean_g_bc - s.true_g) / s.true_g) <= 1e-14);
    CHECK(s.mse_std >= (s.mean_g_hat - s.true_g) * (s.mean_g_hat - s.true_g));
    CHECK(s.mse_bc >= (s.mean_g_bc - s.true_g) * (s.mean_g_bc - s.true_g));
    CHECK(std::abs(s.mse_std - mse(g, s.true_g)) <= 1e-15);
    CHECK(std::abs(s.mse_std - (s.sd_g_hat * s.sd_g_hat + (s.mean_g_hat - s.true_g) * (s.mean_g_hat - s.true_g))) <=
          1e-12);
    CHECK(std::abs(s.mse_bc - (s.sd_g_bc * s.sd_g_bc + (s.mean_g_bc - s.true_g) * (s.mean_g_bc - s.true_g))) <=
          1e-12);
}

TEST_CASE("each replication matches a direct estimate") {
    const auto reps = replicate_cell(2.0, 5, 50, 8);
    for (std::size_t r = 0; r < reps.size(); ++r) {
        Engine engine(replication_seed(8, r));
        const Sample s(ztp::sample(ZtpParams(2.0), 5, engine));
        const auto report = gini::estimate(s);
        CHECK(reps[r].g_hat == report.g_hat);
        CHECK(reps[r].g_bc == report.g_hat_bc);
        CHECK(reps[r].degenerate == report.lambda_degenerate);
    }
}

TEST_CASE("degenerate count within a binomial band") {
    const int reps = 4000;
    const auto s = run_cell(0.1, 5, reps, 2718);
    const double p = std::pow(ztp::pmf(ZtpParams(0.1), 1), 5);
    CHECK(std::abs(p - 0.777) < 1e-3);
    CHECK(std::abs(s.degenerate_count - reps * p) <= 4 * std::sqrt(reps * p * (1 - p)));
}

TEST_CASE("mean matching at n = 2") {
    const int reps = 100000;
    const auto s = run_cell(1.0, 2, reps, 55);
    const double e = gini::expected_gini(ZtpParams(1.0), 2);
    CHECK(std::abs(s.mean_g_hat - e) <= 3 * s.sd_g_hat / std::sqrt(reps));
}

TEST_CASE("run_simulation grid order and failure isolation") {
    SimConfig c;
    c.reps = 20;
    const auto cells = run_simulation(c);
    REQUIRE(cells.size() == 16);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].lambda == c.lambdas[i / 4]);
        CHECK(cells[i].n == c.ns[i % 4]);
        CHECK(cells[i].cell_seed == cell_seed(c.master_seed, i / 4, i % 4));
        CHECK(cells[i].ok());
    }
    std::size_t calls = 0;
    c.threads = 3;
    const auto again = run_simulation(c, [&](const SimCellSummary&, std::size_t done, std::size_t total) {
        ++calls;
        CHECK(done <= total);
    });
    CHECK(calls == 16);
    for (std::size_t i = 0; i < cells.size(); ++i) CHECK(same_summary(cells[i], again[i]));

    // A quadrature budget too small to converge fails cells without stopping the run.
    c.quad.max_depth = 1;
    c.quad.abs_tol = 1e-300;
    c.quad.rel_tol = 1e-300;
    const auto broken = run_simulation(c);
    CHECK(broken.size() == 16);
    for (const auto& cell : broken) CHECK_FALSE(cell.ok());
}
