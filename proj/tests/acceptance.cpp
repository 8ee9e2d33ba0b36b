// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ztpgini/gini.hpp"
#include "ztpgini/montecarlo.hpp"
#include "ztpgini/oracle.hpp"
#include "ztpgini/report.hpp"
#include "ztpgini/rng.hpp"
#include "ztpgini/specfun.hpp"

using namespace ztpgini;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const std::vector<double> kPopLambdas = {0.1, 0.5, 1.0, 2.0, 5.0};
const std::vector<double> kGridLambdas = {0.1, 0.5, 1.0, 2.0};
const std::vector<int> kGridNs = {2, 3, 5, 10, 30, 50};

void criterion1() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double l : kPopLambdas) {
        const ZtpParams p(l);
        worst = std::max(worst, std::abs(gini::gini_population(p) - oracle::gini_population_bruteforce(p)));
    }
    const double elapsed = seconds_since(t0);
    const double g1 = gini::gini_population(ZtpParams(1.0));
    const bool ok = worst <= 1e-9 && elapsed < 1.0 && std::abs(g1 - 0.24665) <= 1e-4;
    verdict(1, ok, "population Gini closed form vs brute-force oracle",
           fmt("max residual %.3g, %.3f s, G(1) = %.9f", worst, elapsed, g1));
}

void criterion2() {
    double worst = 0.0;
    for (double l : kPopLambdas) {
        const ZtpParams p(l);
        const double rhs = 2 * gini::prob_less(p) - 1 + gini::prob_equal(p);
        worst = std::max(worst, std::abs(gini::gini_population(p) - rhs));
    }
    verdict(2, worst <= 1e-10, "characterization identity", fmt("max residual %.3g", worst));
}

void criterion3() {
    double worst = 0.0;
    for (double l : {0.5, 1.0, 2.0}) {
        const ZtpParams p(l);
        const int kmax = oracle::default_kmax(p);
        for (int n : {2, 3}) {
            worst = std::max(worst,
                             std::abs(gini::expected_gini(p, n) - oracle::expected_gini_enumeration(p, n, kmax)));
        }
    }
    const double e12 = gini::expected_gini(ZtpParams(1.0), 2);
    const bool ok = worst <= 1e-8 && std::abs(e12 - 0.20932) <= 1e-4;
    verdict(3, ok, "exact expectation vs enumeration", fmt("max residual %.3g, E(1, 2) = %.9f", worst, e12));
}

void criterion4() {
    double worst = 0.0;
    double at_hostile = 0.0;
    for (double l : kGridLambdas) {
        const ZtpParams p(l);
        for (int n : kGridNs) {
            const double assembled =
                n * ztp::mean(p) * (2 * gini::r1(p, n) - gini::r_infinity(p, n) + gini::expected_g_diag(p, n));
            const double r = std::abs(gini::expected_gini(p, n) - assembled);
            worst = std::max(worst, r);
            if (l == 2.0 && n == 50) at_hostile = r;
        }
    }
    verdict(4, worst <= 1e-10, "assembly identity on 24 grid cells",
           fmt("max residual %.3g, (2, 50) residual %.3g", worst, at_hostile));
}

void criterion5() {
    double worst_r1 = 0.0;
    for (double l : kGridLambdas) {
        const ZtpParams p(l);
        for (int n : kGridNs) worst_r1 = std::max(worst_r1, std::abs(gini::r1(p, n) - oracle::r1_marcum(p, n)));
    }
    double worst_q = 0.0;
    for (double a2 : {0.2, 1.0, 2.0, 4.0}) {
        const double a = std::sqrt(a2);
        worst_q = std::max(worst_q, std::abs(specfun::marcum_q1_equal(a) - specfun::marcum_q1_numeric(a, a)));
    }
    verdict(5, worst_r1 <= 1e-8 && worst_q <= 1e-9, "R1 dual path and Marcum identity",
           fmt("R1 max residual %.3g, Marcum max residual %.3g", worst_r1, worst_q));
}

void criterion6() {
    const auto t0 = Clock::now();
    const int reps = 100000;
    bool ok = true;
    std::string detail;
    for (int n : {2, 5}) {
        const auto s = mc::run_cell(1.0, n, reps, mc::cell_seed(12345, 0, static_cast<std::size_t>(n)));
        const double e = gini::expected_gini(ZtpParams(1.0), n);
        const double se = s.sd_g_hat / std::sqrt(static_cast<double>(reps));
        const double z = (s.mean_g_hat - e) / se;
        ok = ok && s.ok() && std::abs(z) <= 3.0;
        detail += fmt("n=%.0f z=%.2f ", n, z);
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 120.0;
    verdict(6, ok, "Monte Carlo mean of G_hat vs exact expectation", detail + fmt("%.2f s", elapsed));
}

void criterion7() {
    const mc::SimConfig config;
    const auto t0 = Clock::now();
    const auto cells = mc::run_simulation(config);
    const double elapsed = seconds_since(t0);
    int wins = 0;
    bool all_ok = true;
    std::string losers;
    for (const auto& c : cells) {
        all_ok = all_ok && c.ok();
        if (c.rel_bias_bc <= c.rel_bias_std) {
            ++wins;
        } else {
            std::ostringstream os;
            os << " (" << c.lambda << "," << c.n << ")";
            losers += os.str();
        }
    }
    const bool ok = all_ok && cells.size() == 16 && wins >= 14 && elapsed < 60.0;
    verdict(7, ok, "default grid: corrected relative bias <= standard in >= 14 of 16 cells",
           std::to_string(wins) + "/16" + (losers.empty() ? "" : ", worse in" + losers) +
               fmt(", %.2f s", elapsed));
}

void criterion8() {
    auto csv = [](int threads) {
        mc::SimConfig config;
        config.threads = threads;
        std::ostringstream os;
        report::write_simulation_csv(os, mc::run_simulation(config), config.master_seed);
        return os.str();
    };
    const auto a = csv(1);
    const auto b = csv(1);
    const auto c = csv(4);
    verdict(8, a == b && a == c && !a.empty(), "byte-identical CSV across runs and thread counts {1, 4}",
           fmt("%.0f bytes", static_cast<double>(a.size())));
}

void criterion9() {
    const std::size_t draws = 1000000;
    bool ok = true;
    std::string detail;
    for (double l : {0.1, 1.0, 2.0}) {
        const ZtpParams p(l);
        Engine engine(derive_seed(9, static_cast<std::uint64_t>(l * 1000)));
        const auto x = ztp::sample(p, draws, engine);
        // Bins 1..K with expected count >= 5, the rest pooled.
        std::vector<double> expected;
        double covered = 0.0;
        for (std::int64_t k = 1;; ++k) {
            const double e = draws * ztp::pmf(p, k);
            if (e < 5.0) break;
            expected.push_back(e);
            covered += ztp::pmf(p, k);
        }
        const auto bins = static_cast<std::int64_t>(expected.size());
        expected.push_back(draws * (1.0 - covered));
        std::vector<double> observed(expected.size(), 0.0);
        for (auto v : x) observed[static_cast<std::size_t>(std::min(v, bins + 1) - 1)] += 1.0;
        double chi2 = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
        }
        const double dof = static_cast<double>(expected.size() - 1);
        const double critical = boost::math::quantile(boost::math::chi_squared(dof), 0.999);
        ok = ok && chi2 <= critical;

        const Sample s(x);
        const auto fit = ztp::mle(s);
        const double residual = std::abs(ztp::mean_of_rate(fit.lambda_hat) - s.mean());
        ok = ok && residual <= 1e-12 * s.mean();
        detail += fmt("lambda=%g chi2=%.1f/%.1f ", l, chi2, critical) + fmt("mle=%.3g ", residual / s.mean());
    }
    verdict(9, ok, "sampler chi-square at 0.001 and MLE round trip", detail);
}

void criterion10() {
    const double a = gini::gini_sample(Sample({1, 3}));
    const double b = gini::gini_sample(Sample({1, 2, 3}));
    verdict(10, a == 0.5 && b == 1.0 / 3.0, "estimator unit values", fmt("%.17g, %.17g", a, b));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                            criterion6, criterion7, criterion8, criterion9, criterion10};
    int id = 1;
    for (auto* c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            verdict(id, false, "threw", e.what());
        }
        ++id;
    }
    std::printf("acceptance: %d of 10 criteria passed in %.1f s\n", 10 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
