#include "ztpgini/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "ztpgini/format.hpp"

namespace ztpgini::report {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, const char* what) {
    std::vector<T> out;
    while (true) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        const auto value = parse_number<T>(item);
        if (!value) throw InputError(std::string("invalid ") + what + " list entry '" + std::string(item) + "'");
        out.push_back(*value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

std::vector<std::int64_t> read_counts(std::istream& in) {
    std::vector<std::int64_t> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        if (!seen_content) {
            seen_content = true;
            if (text == "count") continue;
        }
        const auto value = parse_number<std::int64_t>(text);
        if (!value) {
            throw InputError("line " + std::to_string(line_no) + ": expected an integer count, got '" +
                             std::string(text) + "'");
        }
        if (*value < 1) {
            throw InputError("line " + std::to_string(line_no) + ": values must be >= 1 (zero-truncated support), got " +
                             std::to_string(*value));
        }
        values.push_back(*value);
    }
    return values;
}

std::vector<double> parse_double_list(std::string_view text) { return parse_list<double>(text, "number"); }

std::vector<int> parse_int_list(std::string_view text) { return parse_list<int>(text, "integer"); }

void write_simulation_csv(std::ostream& out, const std::vector<mc::SimCellSummary>& cells, std::uint64_t seed) {
    out << kSimulationCsvHeader << '\n';
    for (const auto& c : cells) {
        if (!c.ok()) continue;
        out << format_number(c.lambda) << ',' << c.n << ',' << format_number(c.true_g) << ','
            << format_number(c.mean_g_hat) << ',' << format_number(c.mean_g_bc) << ','
            << format_number(c.rel_bias_std) << ',' << format_number(c.rel_bias_bc) << ','
            << format_number(c.mse_std) << ',' << format_number(c.mse_bc) << ',' << c.degenerate_count << ','
            << c.reps << ',' << seed << '\n';
    }
}

void write_estimate_csv_row(std::ostream& out, const gini::GiniReport& r) {
    out << r.n << ',' << format_number(r.g_hat) << ',' << format_number(r.lambda_hat) << ','
        << (r.lambda_degenerate ? "true" : "false") << ',' << format_number(r.bias_hat) << ','
        << format_number(r.g_hat_bc) << '\n';
}

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 570.0;
constexpr double kTop = 60.0;
constexpr double kBottom = 410.0;

std::string px(double v) { return format_fixed(v, 2); }

struct Series {
    double lambda;
    std::vector<std::pair<int, double>> standard;
    std::vector<std::pair<int, double>> corrected;
};

}  // namespace

void write_svg(std::ostream& out, const std::vector<mc::SimCellSummary>& cells, Metric metric, bool log_y) {
    std::vector<Series> series;
    std::vector<int> ns;
    for (const auto& c : cells) {
        if (!c.ok()) continue;
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.lambda == c.lambda; });
        if (it == series.end()) {
            series.push_back({c.lambda, {}, {}});
            it = series.end() - 1;
        }
        const double std_value = metric == Metric::RelativeBias ? c.rel_bias_std : c.mse_std;
        const double bc_value = metric == Metric::RelativeBias ? c.rel_bias_bc : c.mse_bc;
        it->standard.emplace_back(c.n, std_value);
        it->corrected.emplace_back(c.n, bc_value);
        ns.push_back(c.n);
    }
    for (auto& s : series) {
        std::sort(s.standard.begin(), s.standard.end());
        std::sort(s.corrected.begin(), s.corrected.end());
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    double y_max = 0.0;
    double y_min_positive = std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        for (const auto* pts : {&s.standard, &s.corrected}) {
            for (const auto& [n, v] : *pts) {
                y_max = std::max(y_max, v);
                if (v > 0.0) y_min_positive = std::min(y_min_positive, v);
            }
        }
    }
    const double x_lo = ns.empty() ? 0.0 : ns.front();
    const double x_hi = ns.empty() ? 1.0 : (ns.back() > ns.front() ? ns.back() : ns.front() + 1.0);

    double y_lo = 0.0;
    double y_hi = y_max > 0.0 ? y_max * 1.05 : 1.0;
    if (log_y) {
        if (!std::isfinite(y_min_positive)) y_min_positive = 1e-3;
        y_lo = std::floor(std::log10(y_min_positive));
        y_hi = std::ceil(std::log10(y_max > 0.0 ? y_max : 1.0));
        if (y_hi <= y_lo) y_hi = y_lo + 1.0;
    }
    auto sx = [&](double n) { return kLeft + (n - x_lo) / (x_hi - x_lo) * (kRight - kLeft); };
    auto sy = [&](double v) {
        const double t = log_y ? std::log10(v) : v;
        return kBottom - (t - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
    };

    const bool rel = metric == Metric::RelativeBias;
    const std::string title = rel ? "Relative bias of Gini estimators vs. sample size n"
                                  : "Mean squared error of Gini estimators vs. sample size n";
    const std::string y_label = rel ? "relative bias" : "MSE";

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth) << "\" height=\"" << px(kHeight)
        << "\" viewBox=\"0 0 " << px(kWidth) << ' ' << px(kHeight) << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << px((kLeft + kRight) / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";

    // axes
    out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kBottom) << "\" x2=\"" << px(kRight) << "\" y2=\""
        << px(kBottom) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(kLeft) << "\" y2=\""
        << px(kBottom) << "\" stroke=\"black\"/>\n";
    for (int n : ns) {
        out << "<line x1=\"" << px(sx(n)) << "\" y1=\"" << px(kBottom) << "\" x2=\"" << px(sx(n)) << "\" y2=\""
            << px(kBottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(sx(n)) << "\" y=\"" << px(kBottom + 20) << "\" text-anchor=\"middle\" font-size=\"12\">"
            << n << "</text>\n";
    }
    if (log_y) {
        for (double d = y_lo; d <= y_hi + 1e-9; d += 1.0) {
            const double y = kBottom - (d - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
            out << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(kRight) << "\" y2=\""
                << px(y) << "\" stroke=\"#dddddd\"/>\n";
            out << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(y + 4)
                << "\" text-anchor=\"end\" font-size=\"12\">1e" << static_cast<int>(d) << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double v = y_lo + (y_hi - y_lo) * i / 5.0;
            const double y = sy(v);
            out << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(kRight) << "\" y2=\""
                << px(y) << "\" stroke=\"#dddddd\"/>\n";
            out << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\" font-size=\"12\">"
                << format_number(v, 3) << "</text>\n";
        }
    }
    out << "<text x=\"" << px((kLeft + kRight) / 2) << "\" y=\"" << px(kBottom + 45)
        << "\" text-anchor=\"middle\" font-size=\"13\">sample size n</text>\n";
    out << "<text transform=\"translate(25 " << px((kTop + kBottom) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << y_label << "</text>\n";

    auto polyline = [&](const std::vector<std::pair<int, double>>& pts, const char* colour, bool dashed) {
        std::string points;
        for (const auto& [n, v] : pts) {
            if (log_y && !(v > 0.0)) continue;
            if (!points.empty()) points += ' ';
            points += px(sx(n)) + ',' + px(sy(v));
        }
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"";
        if (dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"" << points << "\"/>\n";
        for (const auto& [n, v] : pts) {
            if (log_y && !(v > 0.0)) continue;
            if (dashed) {
                out << "<rect x=\"" << px(sx(n) - 3.5) << "\" y=\"" << px(sy(v) - 3.5)
                    << "\" width=\"7\" height=\"7\" fill=\"white\" stroke=\"" << colour << "\"/>\n";
            } else {
                out << "<circle cx=\"" << px(sx(n)) << "\" cy=\"" << px(sy(v)) << "\" r=\"3.5\" fill=\"" << colour
                    << "\"/>\n";
            }
        }
    };

    double legend_y = kTop + 10;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = kPalette[i % kPalette.size()];
        polyline(series[i].standard, colour, false);
        polyline(series[i].corrected, colour, true);
        const std::string lam = format_number(series[i].lambda, 6);
        for (int dashed = 0; dashed < 2; ++dashed) {
            out << "<line x1=\"" << px(kRight + 20) << "\" y1=\"" << px(legend_y) << "\" x2=\"" << px(kRight + 50)
                << "\" y2=\"" << px(legend_y) << "\" stroke=\"" << colour << "\" stroke-width=\"2\""
                << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
            out << "<text x=\"" << px(kRight + 56) << "\" y=\"" << px(legend_y + 4) << "\" font-size=\"12\">"
                << (dashed ? "bias-corrected" : "standard") << ", λ=" << lam << "</text>\n";
            legend_y += 20;
        }
    }
    out << "</svg>\n";
}

}  // namespace ztpgini::report
