#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
};

// stdout only; stderr goes to the test log.
Run run(const std::string& args) {
    const std::string cmd = std::string(ZTPGINI_CLI) + " " + args;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

double value_of(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    std::string k;
    double v;
    while (in >> k >> v) {
        if (k == key) return v;
    }
    return NAN;
}

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / ("ztpgini_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("pop") {
    auto r = run("pop --lambda 1.0");
    CHECK(r.code == 0);
    CHECK(std::abs(value_of(r.out, "gini_population") - 0.24663) < 1e-4);
    CHECK(run("pop --lambda -1 2>/dev/null").code == 2);
    CHECK(run("pop --lambda nan 2>/dev/null").code == 2);
    r = run("pop --lambda 1e-9");
    CHECK(r.code == 0);
    const double tiny = value_of(r.out, "gini_population");
    CHECK(tiny >= 0.0);
    CHECK(tiny < 1e-8);
}

TEST_CASE("pop names the flag on bad input") {
    const auto r = run("pop --lambda -1 2>&1");
    CHECK(r.code == 2);
    CHECK(r.out.find("--lambda") != std::string::npos);
}

TEST_CASE("expect") {
    auto r = run("expect --lambda 1 --n 2");
    CHECK(r.code == 0);
    CHECK(std::abs(value_of(r.out, "expected_gini") - 0.209322) < 1e-6);
    CHECK(std::abs(value_of(r.out, "bias") - (-0.03730)) < 2e-4);
    CHECK(run("expect --lambda 1 --n 1 2>/dev/null").code == 2);
    r = run("expect --lambda 1 --n 2000");
    CHECK(r.code == 0);
    CHECK(std::abs(value_of(r.out, "bias")) < 2e-3);
}

TEST_CASE("estimate") {
    const auto dir = temp_dir();
    std::ofstream(dir / "a.txt") << "1\n3\n";
    std::ofstream(dir / "ones.csv") << "count\n1\n1\n1\n";
    std::ofstream(dir / "zero.txt") << "1\n0\n2\n";

    auto r = run((dir / "a.txt").string());
    CHECK(r.code == 2);  // missing subcommand is a usage error
    r = run("estimate " + (dir / "a.txt").string());
    CHECK(r.code == 0);
    CHECK(value_of(r.out, "g_hat") == 0.5);
    CHECK(r.out.find("g_hat_bc") != std::string::npos);

    r = run("estimate " + (dir / "ones.csv").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("lambda_degenerate true") != std::string::npos);

    r = run("estimate " + (dir / "zero.txt").string() + " 2>&1");
    CHECK(r.code == 2);
    CHECK(r.out.find("values must be >= 1") != std::string::npos);

    r = run("estimate --no-bias-correct - < " + (dir / "a.txt").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("g_hat_bc") == std::string::npos);

    r = run("estimate " + (dir / "a.txt").string() + " --csv " + (dir / "row.csv").string());
    CHECK(r.code == 0);
    CHECK(slurp(dir / "row.csv").rfind("n,g_hat,lambda_hat,lambda_degenerate,bias_hat,g_hat_bc\n2,0.5,", 0) == 0);

    CHECK(run("estimate " + (dir / "missing.txt").string() + " 2>/dev/null").code == 2);
    fs::remove_all(dir);
}

TEST_CASE("sample") {
    const auto a = run("sample --lambda 2 --n 500 --seed 9");
    const auto b = run("sample --lambda 2 --n 500 --seed 9");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    long long v;
    int count = 0;
    while (in >> v) {
        CHECK(v >= 1);
        ++count;
    }
    CHECK(count == 500);
    CHECK(run("sample --lambda 0 --n 5 2>/dev/null").code == 2);
}

TEST_CASE("sample mean over a million draws") {
    const auto r = run("sample --lambda 1 --n 1000000 --seed 3");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    double s = 0.0, s2 = 0.0;
    long long v;
    long long n = 0;
    while (in >> v) {
        s += v;
        s2 += static_cast<double>(v) * v;
        ++n;
    }
    CHECK(n == 1000000);
    const double mu = 1.0 / (1.0 - std::exp(-1.0));
    const double var = s2 / n - (s / n) * (s / n);
    CHECK(std::abs(s / n - mu) < 4 * std::sqrt(var / n));
}

TEST_CASE("simulate") {
    const auto dir = temp_dir();
    auto r = run("simulate --reps 1 --ns 2 --lambdas 1 --quiet");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("lambda,n,true_g,mean_g_hat,mean_g_bc,rel_bias_std,rel_bias_bc,mse_std,mse_bc,degenerate_count,"
                      "reps,seed\n1,2,",
                      0) == 0);

    const std::string base = "simulate --reps 200 --quiet --seed 7 ";
    CHECK(run(base + "--threads 1 --out " + (dir / "t1.csv").string()).code == 0);
    CHECK(run(base + "--threads 4 --out " + (dir / "t4.csv").string() + " --svg " + (dir / "fig").string()).code ==
          0);
    const auto t1 = slurp(dir / "t1.csv");
    CHECK(t1 == slurp(dir / "t4.csv"));
    std::size_t lines = 0;
    for (char ch : t1) lines += ch == '\n';
    CHECK(lines == 17);
    CHECK(fs::exists(dir / "fig" / "relative_bias.svg"));
    CHECK(fs::exists(dir / "fig" / "mse.svg"));

    CHECK(run("simulate --reps 0 --quiet 2>/dev/null").code == 2);
    CHECK(run("simulate --ns 1 --quiet 2>/dev/null").code == 2);
    CHECK(run("simulate --lambdas 0.1,x --quiet 2>/dev/null").code == 2);
    fs::remove_all(dir);
}

TEST_CASE("verify") {
    auto r = run("verify --lambdas 1 --ns 2,3");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    r = run("verify --lambdas 1 --ns 2 --perturb 1e-6");
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL characterization") != std::string::npos);
    CHECK(r.out.find("residual=") != std::string::npos);
    r = run("verify --lambdas 1e-6 --ns 5");
    CHECK(r.code == 0);
    CHECK(r.out.find("nan") == std::string::npos);
    CHECK(run("verify --lambdas \"\" 2>/dev/null").code == 2);
    r = run(std::string("verify --lambdas 1 --ns 2 --golden ") + ZTPGINI_TEST_DATA "/oracle_golden.csv");
    CHECK(r.code == 0);
}

TEST_CASE("usage") {
    CHECK(run("--help > /dev/null").code == 0);
    CHECK(run("bogus 2>/dev/null").code == 2);
    CHECK(run("2>/dev/null").code == 2);
}
