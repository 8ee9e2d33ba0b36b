#include "ztpgini/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ztpgini/format.hpp"
#include "ztpgini/gini.hpp"
#include "ztpgini/specfun.hpp"

namespace ztpgini::oracle {

namespace {

double table_mean(const std::vector<double>& p) {
    double mu = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) mu += static_cast<double>(i + 1) * p[i];
    return mu;
}

// Poisson(lambda) shifted by one, from its own recursion.
std::vector<double> size_biased_table(const ZtpParams& params, std::size_t count) {
    const double lambda = params.lambda();
    std::vector<double> q(count);
    double term = std::exp(-lambda);
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) term *= lambda / static_cast<double>(i);
        q[i] = term;
    }
    return q;
}

}  // namespace

std::vector<double> pmf_table(const ZtpParams& params, double tail) {
    if (!(tail > 0.0)) throw std::domain_error("pmf_table: tail must be > 0");
    const double lambda = params.lambda();
    std::vector<double> p;
    double term = lambda / std::expm1(lambda);
    for (std::int64_t k = 1;; ++k) {
        if (k > 1) term *= lambda / static_cast<double>(k);
        p.push_back(term);
        // Once k + 1 > lambda the remaining terms are dominated by a geometric
        // series with ratio lambda / (k + 1).
        const double ratio = lambda / static_cast<double>(k + 1);
        if (ratio < 1.0 && term * ratio / (1.0 - ratio) < tail) break;
        if (k > 100000) throw std::runtime_error("pmf_table: tail not reached");
    }
    return p;
}

int default_kmax(const ZtpParams& params, double tail) {
    const auto p = pmf_table(params, tail * 1e-6);
    // Suffix sums give the complement 1 - F(k) without cancellation.
    double complement = 0.0;
    std::vector<double> suffix(p.size());
    for (std::size_t i = p.size(); i-- > 0;) {
        suffix[i] = complement;
        complement += p[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (suffix[i] < tail) return static_cast<int>(i + 1);
    }
    return static_cast<int>(p.size());
}

double gini_population_bruteforce(const ZtpParams& params, double tail) {
    const auto p = pmf_table(params, tail);
    // 1 - F(k) as a suffix sum, so truncated mass does not leak into every term.
    std::vector<double> survival(p.size() + 1, 0.0);
    for (std::size_t k = p.size(); k-- > 0;) survival[k] = survival[k + 1] + p[k];
    double cdf = 0.0;
    double mean_abs_diff = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        cdf += p[k];
        mean_abs_diff += 2.0 * cdf * survival[k + 1];
    }
    return mean_abs_diff / (2.0 * table_mean(p));
}

double gini_population_pairsum(const ZtpParams& params, double tail) {
    const auto p = pmf_table(params, tail);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        for (std::size_t l = k + 1; l < p.size(); ++l) sum += static_cast<double>(l - k) * p[k] * p[l];
    }
    return sum / table_mean(p);
}

double prob_less_series(const ZtpParams& params, double tail) {
    const auto p = pmf_table(params, tail * 1e-4);
    const auto q = size_biased_table(params, p.size() + 1);
    // sum_k F(k - 1) P*(k); F(0) = 0.
    double cdf = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        sum += cdf * q[i];
        if (i < p.size()) cdf += p[i];
    }
    return sum;
}

double prob_equal_series(const ZtpParams& params, double tail) {
    const auto p = pmf_table(params, tail * 1e-4);
    const auto q = size_biased_table(params, p.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * q[i];
    return sum;
}

double expected_g_diag_n2_series(const ZtpParams& params, double tail) {
    const auto p = pmf_table(params, tail * 1e-4);
    const auto q = size_biased_table(params, p.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * q[i] / (2.0 * static_cast<double>(i + 1));
    return sum;
}

double laplace_series(const ZtpParams& params, double x, double tail) {
    const auto p = pmf_table(params, tail * 1e-4);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::exp(-x * static_cast<double>(i + 1)) * p[i];
    return sum;
}

double h_series(const ZtpParams& params, double x, std::int64_t xstar) {
    const double lambda = params.lambda();
    double term = lambda / std::expm1(lambda);
    double sum = 0.0;
    for (std::int64_t k = 1; k < xstar; ++k) {
        if (k > 1) term *= lambda / static_cast<double>(k);
        sum += std::exp(-x * static_cast<double>(k)) * term;
    }
    return sum;
}

double expected_gini_enumeration(const ZtpParams& params, int n, int kmax, bool allow_n4, bool parallel) {
    if (n < 2 || n > 4) throw std::domain_error("enumeration: n must be 2, 3 or 4");
    if (n == 4 && !allow_n4) throw std::domain_error("enumeration: n = 4 needs allow_n4");
    if (kmax < 1) throw std::domain_error("enumeration: kmax must be >= 1");
    if (std::pow(static_cast<double>(kmax), n) > 1e7) throw std::domain_error("enumeration: kmax^n exceeds 1e7");

    const double lambda = params.lambda();
    std::vector<double> p(static_cast<std::size_t>(kmax));
    double term = lambda / std::expm1(lambda);
    for (int k = 1; k <= kmax; ++k) {
        if (k > 1) term *= lambda / k;
        p[static_cast<std::size_t>(k - 1)] = term;
    }
    const auto full = pmf_table(params, 1e-18);
    double beyond = 0.0;
    for (std::size_t i = static_cast<std::size_t>(kmax); i < full.size(); ++i) beyond += full[i];
    if (!(beyond < 1e-12)) throw std::domain_error("enumeration: tail mass beyond kmax is >= 1e-12");

    std::vector<double> partial(static_cast<std::size_t>(kmax), 0.0);
    auto leading = [&](int first) {
        std::vector<int> tuple(static_cast<std::size_t>(n), 1);
        tuple[0] = first;
        double acc = 0.0;
        for (;;) {
            double weight = 1.0;
            std::int64_t total = 0;
            std::int64_t diffs = 0;
            for (int i = 0; i < n; ++i) {
                weight *= p[static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)] - 1)];
                total += tuple[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < n; ++j) {
                    diffs += std::abs(tuple[static_cast<std::size_t>(i)] - tuple[static_cast<std::size_t>(j)]);
                }
            }
            acc += weight * static_cast<double>(diffs) / (static_cast<double>(n - 1) * static_cast<double>(total));
            int pos = n - 1;
            while (pos >= 1 && tuple[static_cast<std::size_t>(pos)] == kmax) {
                tuple[static_cast<std::size_t>(pos)] = 1;
                --pos;
            }
            if (pos < 1) break;
            ++tuple[static_cast<std::size_t>(pos)];
        }
        partial[static_cast<std::size_t>(first - 1)] = acc;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int first = 1; first <= kmax; ++first) leading(first);
    } else {
        for (int first = 1; first <= kmax; ++first) leading(first);
    }
    double sum = 0.0;
    for (double v : partial) sum += v;
    return sum;
}

double r1_marcum(const ZtpParams& params, int n, const QuadSpec& spec) {
    if (n < 2) throw std::domain_error("r1_marcum: n must be >= 2");
    const double lambda = params.lambda();
    const double log_c = std::log(-std::expm1(-lambda));
    const double log_prefactor = -n * lambda - (n - 1) * log_c;
    auto integrand = [=](double y) {
        if (n > 2 && y < 1e-300) return 0.0;
        const double a = std::sqrt(2.0 * lambda * y);
        const double q = specfun::marcum_q1_numeric(a, a, spec);
        const double power = n > 2 ? (n - 2) * log_expm1(lambda * y) : 0.0;
        return std::exp(log_prefactor + 2.0 * lambda * y + std::log(q) + power);
    };
    return integrate(integrand, 0.0, 1.0, spec) - std::exp(-lambda) / ((n - 1) * lambda);
}

double r_infinity_numeric(const ZtpParams& params, int n, const QuadSpec& spec) {
    if (n < 2) throw std::domain_error("r_infinity_numeric: n must be >= 2");
    const double lambda = params.lambda();
    const double log_c = std::log(-std::expm1(-lambda));
    const double log_prefactor = -n * lambda - (n - 1) * log_c;
    auto integrand = [=](double x) {
        const double a = lambda * std::exp(-x);
        if (a == 0.0) return 0.0;
        return std::exp(log_prefactor + a - x + (n - 1) * log_expm1(a));
    };
    return integrate_upper_tail(integrand, 0.0, spec).value;
}

bool IdentityReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

IdentityReport identity_suite(const ZtpParams& params, int n, const QuadSpec& spec, double perturbation,
                              const IdentityTolerances& tol) {
    IdentityReport report;
    const double lambda = params.lambda();
    auto add = [&](const std::string& name, double lhs, double rhs, double tolerance, double condition = 1.0) {
        IdentityCheck c;
        c.name = name;
        c.lambda = lambda;
        c.n = n;
        c.lhs = lhs + perturbation;
        c.rhs = rhs;
        c.residual = std::abs(c.lhs - c.rhs);
        c.tolerance = tolerance;
        c.condition = condition;
        c.passed = std::isfinite(c.residual) && c.residual <= tolerance;
        if (!c.passed && std::isfinite(c.residual) &&
            c.residual <= 64.0 * std::numeric_limits<double>::epsilon() * condition) {
            c.passed = true;
            c.degraded = true;
        }
        report.checks.push_back(c);
    };

    add("characterization", gini::gini_population(params, spec),
        2.0 * gini::prob_less(params, spec) - 1.0 + gini::prob_equal(params), tol.characterization);

    const double mu = ztp::mean(params);
    const double r1 = gini::r1(params, n, spec);
    const double rinf = gini::r_infinity(params, n);
    const double diag = gini::expected_g_diag(params, n, spec);
    const double assembly_condition = n * mu * std::exp(-lambda) / ((n - 1) * lambda);
    add("assembly", gini::expected_gini(params, n, spec), n * mu * (2.0 * r1 - rinf + diag), tol.assembly,
        assembly_condition);
    add("r1_marcum", r1, r1_marcum(params, n, spec), tol.r1_dual);
    add("r_infinity_numeric", rinf, r_infinity_numeric(params, n, spec), tol.r_infinity);

    // Worst residual over a small grid of transform arguments.
    const double xs[] = {0.05, std::numbers::ln2, 2.0};
    const std::int64_t xstars[] = {1, 2, 5, 20};
    double worst_l = 0.0, lhs_l = 0.0, rhs_l = 0.0;
    double worst_h = 0.0, lhs_h = 0.0, rhs_h = 0.0;
    for (double x : xs) {
        const double closed = ztp::laplace_transform(params, x);
        const double series = laplace_series(params, x);
        if (!(std::abs(closed - series) <= worst_l)) {
            worst_l = std::abs(closed - series);
            lhs_l = closed;
            rhs_l = series;
        }
        for (auto xstar : xstars) {
            const double hc = ztp::h_function(params, x, xstar);
            const double hs = h_series(params, x, xstar);
            if (!(std::abs(hc - hs) <= worst_h)) {
                worst_h = std::abs(hc - hs);
                lhs_h = hc;
                rhs_h = hs;
            }
        }
    }
    add("laplace_series", lhs_l, rhs_l, tol.series);
    add("h_series", lhs_h, rhs_h, tol.series);
    return report;
}

std::vector<GoldenRow> make_golden() {
    std::vector<GoldenRow> rows;
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const ZtpParams params(lambda);
        const int kmax = static_cast<int>(pmf_table(params, kDefaultTail).size());
        rows.push_back({"gini_population", lambda, 0, gini_population_bruteforce(params), kDefaultTail, kmax});
        rows.push_back({"prob_less", lambda, 0, prob_less_series(params), kDefaultTail, kmax});
        rows.push_back({"prob_equal", lambda, 0, prob_equal_series(params), kDefaultTail, kmax});
    }
    for (double lambda : {0.5, 1.0, 2.0}) {
        const ZtpParams params(lambda);
        const int kmax = default_kmax(params);
        for (int n : {2, 3}) {
            rows.push_back(
                {"expected_gini", lambda, n, expected_gini_enumeration(params, n, kmax), kDefaultTail, kmax});
        }
    }
    return rows;
}

void write_golden(std::ostream& out, const std::vector<GoldenRow>& rows) {
    out << "quantity,lambda,n,value,tail,kmax\n";
    for (const auto& r : rows) {
        out << r.quantity << ',' << format_number(r.lambda) << ',' << r.n << ',' << format_number(r.value) << ','
            << format_number(r.tail) << ',' << r.kmax << '\n';
    }
}

std::vector<GoldenRow> read_golden(std::istream& in) {
    std::vector<GoldenRow> rows;
    std::string line;
    if (!std::getline(in, line) || line.rfind("quantity,lambda,n,value,tail,kmax", 0) != 0) {
        throw std::runtime_error("golden fixture: missing or unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell[6];
        for (auto& c : cell) {
            if (!std::getline(fields, c, ',')) throw std::runtime_error("golden fixture: short row: " + line);
        }
        GoldenRow r;
        r.quantity = cell[0];
        const auto lambda = parse_number<double>(cell[1]);
        const auto n = parse_number<int>(cell[2]);
        const auto value = parse_number<double>(cell[3]);
        const auto tail = parse_number<double>(cell[4]);
        const auto kmax = parse_number<int>(cell[5]);
        if (!lambda || !n || !value || !tail || !kmax) throw std::runtime_error("golden fixture: bad number: " + line);
        r.lambda = *lambda;
        r.n = *n;
        r.value = *value;
        r.tail = *tail;
        r.kmax = *kmax;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ztpgini::oracle
