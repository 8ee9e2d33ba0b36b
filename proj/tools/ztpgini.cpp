// Command-line front end: closed forms, estimation from count files, sampling,
// the Monte Carlo study and the verification suite.
//
// Exit codes: 0 success, 1 runtime or accuracy failure, 2 usage or validation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ztpgini/format.hpp"
#include "ztpgini/gini.hpp"
#include "ztpgini/montecarlo.hpp"
#include "ztpgini/oracle.hpp"
#include "ztpgini/report.hpp"
#include "ztpgini/rng.hpp"
#include "ztpgini/ztp.hpp"

namespace {

using namespace ztpgini;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require_lambda(double lambda, const std::string& flag = "--lambda") {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError(flag + " must be a positive finite number");
}

void require_n(long long n, const std::string& flag = "--n") {
    if (n < 2) throw UsageError(flag + " must be an integer >= 2");
}

std::string num(double v) { return format_number(v, 12); }

std::vector<double> lambda_list(const std::string& text, const std::string& flag) {
    if (text.empty()) throw UsageError(flag + " is empty");
    std::vector<double> out;
    try {
        out = report::parse_double_list(text);
    } catch (const report::InputError& e) {
        throw UsageError(flag + ": " + e.what());
    }
    for (double l : out) require_lambda(l, flag);
    return out;
}

std::vector<int> n_list(const std::string& text, const std::string& flag) {
    if (text.empty()) throw UsageError(flag + " is empty");
    std::vector<int> out;
    try {
        out = report::parse_int_list(text);
    } catch (const report::InputError& e) {
        throw UsageError(flag + ": " + e.what());
    }
    for (int n : out) require_n(n, flag);
    return out;
}

struct Options {
    double lambda = 0.0;
    long long n = 0;
    std::uint64_t seed = 1;
    std::string input = "-";
    bool no_bias_correct = false;
    std::string csv_out;
    std::string lambdas = "0.1,0.5,1,2";
    std::string ns = "5,10,30,50";
    std::string verify_ns = "2,3,5,10,30,50";
    int reps = 1000;
    std::uint64_t sim_seed = mc::SimConfig{}.master_seed;
    int threads = 0;
    std::string out;
    std::string svg_dir;
    bool log_y = false;
    bool quiet = false;
    std::string golden;
    std::string write_golden;
    double perturb = 0.0;
};

int cmd_pop(const Options& o) {
    require_lambda(o.lambda);
    const ZtpParams params(o.lambda);
    std::cout << "gini_population " << num(gini::gini_population(params)) << '\n';
    return 0;
}

int cmd_expect(const Options& o) {
    require_lambda(o.lambda);
    require_n(o.n);
    const ZtpParams params(o.lambda);
    const int n = static_cast<int>(o.n);
    const double g = gini::gini_population(params);
    const double e = gini::expected_gini(params, n);
    std::cout << "gini_population " << num(g) << '\n';
    std::cout << "expected_gini " << num(e) << '\n';
    std::cout << "bias " << num(e - g) << '\n';
    return 0;
}

int cmd_estimate(const Options& o) {
    std::vector<std::int64_t> values;
    if (o.input == "-") {
        values = report::read_counts(std::cin);
    } else {
        std::ifstream in(o.input);
        if (!in) throw UsageError("cannot open input file '" + o.input + "'");
        values = report::read_counts(in);
    }
    if (values.size() < 2) throw UsageError("input must contain at least two counts");
    const Sample sample(std::move(values));

    gini::GiniReport r;
    if (o.no_bias_correct) {
        r.n = sample.size();
        r.g_hat = gini::gini_sample(sample);
        const auto fit = ztp::mle(sample);
        r.lambda_hat = fit.lambda_hat;
        r.lambda_degenerate = fit.degenerate;
    } else {
        r = gini::estimate(sample);
    }
    std::cout << "n " << r.n << '\n';
    std::cout << "g_hat " << num(r.g_hat) << '\n';
    std::cout << "lambda_hat " << num(r.lambda_hat) << '\n';
    std::cout << "lambda_degenerate " << (r.lambda_degenerate ? "true" : "false") << '\n';
    if (!o.no_bias_correct) {
        std::cout << "bias_hat " << num(r.bias_hat) << '\n';
        std::cout << "g_hat_bc " << num(r.g_hat_bc) << '\n';
    }
    if (!o.csv_out.empty()) {
        std::ofstream csv(o.csv_out, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write '" + o.csv_out + "'");
        csv << report::kEstimateCsvHeader << '\n';
        report::write_estimate_csv_row(csv, r);
    }
    return 0;
}

int cmd_sample(const Options& o) {
    require_lambda(o.lambda);
    if (o.n < 1) throw UsageError("--n must be an integer >= 1");
    Engine engine(o.seed);
    const auto values = ztp::sample(ZtpParams(o.lambda), static_cast<std::size_t>(o.n), engine);
    std::string buffer;
    buffer.reserve(values.size() * 3);
    for (auto v : values) {
        buffer += std::to_string(v);
        buffer += '\n';
    }
    std::cout << buffer;
    return 0;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
}

int cmd_simulate(const Options& o) {
    mc::SimConfig config;
    config.lambdas = lambda_list(o.lambdas, "--lambdas");
    config.ns = n_list(o.ns, "--ns");
    if (o.reps < 1) throw UsageError("--reps must be >= 1");
    if (o.threads < 0) throw UsageError("--threads must be >= 0");
    config.reps = o.reps;
    config.master_seed = o.sim_seed;
    config.threads = o.threads;

    mc::ProgressSink progress;
    if (!o.quiet) {
        progress = [](const mc::SimCellSummary& c, std::size_t done, std::size_t total) {
            std::cerr << "[" << done << "/" << total << "] lambda=" << format_number(c.lambda) << " n=" << c.n
                      << (c.ok() ? "" : " FAILED: " + c.failure) << '\n';
        };
    }
    const auto cells = mc::run_simulation(config, progress);

    std::ostringstream csv;
    report::write_simulation_csv(csv, cells, config.master_seed);
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        write_file(o.out, csv.str());
    }
    if (!o.svg_dir.empty()) {
        std::filesystem::create_directories(o.svg_dir);
        std::ostringstream rel;
        report::write_svg(rel, cells, report::Metric::RelativeBias, o.log_y);
        write_file(std::filesystem::path(o.svg_dir) / "relative_bias.svg", rel.str());
        std::ostringstream mse;
        report::write_svg(mse, cells, report::Metric::Mse, o.log_y);
        write_file(std::filesystem::path(o.svg_dir) / "mse.svg", mse.str());
    }
    int failed = 0;
    for (const auto& c : cells) {
        if (!c.ok()) {
            std::cerr << "error: " << c.failure << '\n';
            ++failed;
        }
    }
    return failed == 0 ? 0 : 1;
}

void print_check(bool passed, const std::string& name, double lambda, int n, double residual, double tol) {
    std::cout << (passed ? "PASS " : "FAIL ") << name << " lambda=" << format_number(lambda) << " n=" << n
              << " residual=" << format_number(residual, 3) << " tol=" << format_number(tol, 3) << '\n';
}

int cmd_verify(const Options& o) {
    const auto lambdas = lambda_list(o.lambdas, "--lambdas");
    const auto ns = n_list(o.verify_ns, "--ns");

    if (!o.write_golden.empty()) {
        std::ostringstream golden;
        oracle::write_golden(golden, oracle::make_golden());
        write_file(o.write_golden, golden.str());
        std::cout << "wrote " << o.write_golden << '\n';
    }

    int failures = 0;
    for (double lambda : lambdas) {
        const ZtpParams params(lambda);
        const double closed = gini::gini_population(params) + o.perturb;
        const double brute = oracle::gini_population_bruteforce(params);
        const bool ok = std::abs(closed - brute) <= 1e-9;
        failures += !ok;
        print_check(ok, "gini_population_bruteforce", lambda, 0, std::abs(closed - brute), 1e-9);

        for (int n : ns) {
            const auto suite = oracle::identity_suite(params, n, {}, o.perturb);
            for (const auto& c : suite.checks) {
                failures += !c.passed;
                print_check(c.passed, c.name + (c.degraded ? " (degraded)" : ""), c.lambda, c.n, c.residual,
                            c.tolerance);
            }
            if (n <= 3) {
                const int kmax = oracle::default_kmax(params);
                if (std::pow(static_cast<double>(kmax), n) <= 1e7) {
                    const double e = gini::expected_gini(params, n) + o.perturb;
                    const double enumerated = oracle::expected_gini_enumeration(params, n, kmax);
                    const bool ok_e = std::abs(e - enumerated) <= 1e-8;
                    failures += !ok_e;
                    print_check(ok_e, "expected_gini_enumeration", lambda, n, std::abs(e - enumerated), 1e-8);
                }
            }
        }
    }

    if (!o.golden.empty()) {
        std::ifstream in(o.golden);
        if (!in) throw UsageError("cannot open golden fixture '" + o.golden + "'");
        for (const auto& row : oracle::read_golden(in)) {
            const ZtpParams params(row.lambda);
            double value = 0.0;
            double tol = 1e-10;
            if (row.quantity == "gini_population") {
                value = gini::gini_population(params);
                tol = 1e-9;
            } else if (row.quantity == "prob_less") {
                value = gini::prob_less(params);
            } else if (row.quantity == "prob_equal") {
                value = gini::prob_equal(params);
            } else if (row.quantity == "expected_gini") {
                value = gini::expected_gini(params, row.n);
                tol = 1e-8;
            } else {
                throw std::runtime_error("golden fixture: unknown quantity '" + row.quantity + "'");
            }
            value += o.perturb;
            const bool ok = std::abs(value - row.value) <= tol;
            failures += !ok;
            print_check(ok, "golden_" + row.quantity, row.lambda, row.n, std::abs(value - row.value), tol);
        }
    }

    std::cout << (failures == 0 ? "verify: all checks passed" : "verify: " + std::to_string(failures) + " check(s) failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gini coefficient of zero-truncated Poisson counts: exact values, bias and bias correction"};
    app.require_subcommand(1);
    Options o;

    auto* pop = app.add_subcommand("pop", "Population Gini coefficient of ZTP(lambda)");
    pop->add_option("--lambda", o.lambda, "Poisson rate lambda > 0")->required();

    auto* expect = app.add_subcommand("expect", "Population Gini, exact E(G_hat) and bias for sample size n");
    expect->add_option("--lambda", o.lambda, "Poisson rate lambda > 0")->required();
    expect->add_option("--n", o.n, "Sample size n >= 2")->required();

    auto* estimate = app.add_subcommand("estimate", "Standard and bias-corrected Gini from a file of counts");
    estimate->add_option("input", o.input, "Count file (one integer per line, or CSV with header 'count'); '-' reads stdin");
    estimate->add_flag("--no-bias-correct", o.no_bias_correct, "Report only G_hat and lambda_hat");
    estimate->add_option("--csv", o.csv_out, "Also write the report as a one-row CSV");

    auto* sample = app.add_subcommand("sample", "Draw n ZTP(lambda) counts");
    sample->add_option("--lambda", o.lambda, "Poisson rate lambda > 0")->required();
    sample->add_option("--n", o.n, "Number of draws")->required();
    sample->add_option("--seed", o.seed, "RNG seed")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo study of both estimators");
    simulate->add_option("--lambdas", o.lambdas, "Comma-separated lambda grid")->capture_default_str();
    simulate->add_option("--ns", o.ns, "Comma-separated sample sizes")->capture_default_str();
    simulate->add_option("--reps", o.reps, "Replications per cell")->capture_default_str();
    simulate->add_option("--seed", o.sim_seed, "Master seed")->capture_default_str();
    simulate->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)")
        ->envname("ZTPGINI_THREADS")
        ->capture_default_str();
    simulate->add_option("--out", o.out, "Results CSV path (stdout when omitted)");
    simulate->add_option("--svg", o.svg_dir, "Directory for relative_bias.svg and mse.svg");
    simulate->add_flag("--log-y", o.log_y, "Logarithmic y axis in the figures");
    simulate->add_flag("--quiet", o.quiet, "No progress on stderr");

    auto* verify = app.add_subcommand("verify", "Cross-check closed forms against brute-force oracles");
    verify->add_option("--lambdas", o.lambdas, "Comma-separated lambda grid")->capture_default_str();
    verify->add_option("--ns", o.verify_ns, "Comma-separated sample sizes")->capture_default_str();
    verify->add_option("--golden", o.golden, "Also compare against this oracle_golden.csv");
    verify->add_option("--write-golden", o.write_golden, "Regenerate the golden fixture at this path");
    verify->add_option("--perturb", o.perturb, "Test hook: offset added to every closed-form value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*pop) return cmd_pop(o);
        if (*expect) return cmd_expect(o);
        if (*estimate) return cmd_estimate(o);
        if (*sample) return cmd_sample(o);
        if (*simulate) return cmd_simulate(o);
        if (*verify) return cmd_verify(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const report::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
