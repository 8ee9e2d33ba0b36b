#include "ztpgini/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace ztpgini {

namespace {

// Kronrod abscissae on [0,1); odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXk = {
    0.00000000000000000e+00, 1.48874338981631211e-01, 2.94392862701460198e-01,
    4.33395394129247191e-01, 5.62757134668604683e-01, 6.79409568299024406e-01,
    7.80817726586416897e-01, 8.65063366688984511e-01, 9.30157491355708226e-01,
    9.73906528517171720e-01, 9.95657163025808081e-01,
};
constexpr std::array<double, 11> kWk = {
    1.49445554002916906e-01, 1.47739104901338491e-01, 1.42775938577060081e-01,
    1.34709217311473326e-01, 1.23491976262065851e-01, 1.09387158802297642e-01,
    9.31254545836976055e-02, 7.50396748109199528e-02, 5.47558965743519960e-02,
    3.25581623079647275e-02, 1.16946388673718743e-02,
};
constexpr std::array<double, 5> kWg = {
    2.95524224714752870e-01, 2.69266719309996355e-01, 2.19086362515982044e-01,
    1.49451349150580593e-01, 6.66713443086881376e-02,
};

// Hard cap on live panels; depth alone would allow 2^max_depth.
constexpr std::size_t kMaxPanels = 8192;

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    int depth;
};

struct ByError {
    bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

Panel gauss_kronrod21(const Integrand& f, double lo, double hi, int depth) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kWk[0] * fc;
    double gauss = 0.0;
    for (std::size_t i = 1; i < kXk.size(); ++i) {
        const double dx = half * kXk[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWk[i] * pair;
        if (i % 2 == 1) gauss += kWg[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        std::ostringstream os;
        os << "integrand is not finite on [" << lo << ", " << hi << "]";
        throw QuadratureError(os.str(), kronrod, std::numeric_limits<double>::infinity());
    }
    return {lo, hi, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace

void QuadSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1) {
        throw std::invalid_argument("QuadSpec requires abs_tol > 0, rel_tol > 0 and max_depth >= 1");
    }
}

QuadResult integrate_detailed(const Integrand& f, double lo, double hi, const QuadSpec& spec) {
    spec.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw std::domain_error("integrate: requires finite lo < hi");
    }

    std::vector<Panel> panels;
    panels.push_back(gauss_kronrod21(f, lo, hi, 0));

    double value = panels.front().value;
    double error = panels.front().error;
    for (;;) {
        if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
            return {value, error, static_cast<int>(panels.size())};
        }
        const Panel worst = panels.front();
        if (worst.depth >= spec.max_depth || panels.size() >= kMaxPanels) {
            std::ostringstream os;
            os << "integrate: no convergence on [" << lo << ", " << hi << "] (estimate " << value
               << ", error bound " << error << ")";
            throw QuadratureError(os.str(), value, error);
        }
        std::pop_heap(panels.begin(), panels.end(), ByError{});
        panels.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        panels.push_back(gauss_kronrod21(f, worst.lo, mid, worst.depth + 1));
        std::push_heap(panels.begin(), panels.end(), ByError{});
        panels.push_back(gauss_kronrod21(f, mid, worst.hi, worst.depth + 1));
        std::push_heap(panels.begin(), panels.end(), ByError{});

        // Re-sum rather than update incrementally so cancellation does not accumulate.
        value = 0.0;
        error = 0.0;
        for (const auto& p : panels) {
            value += p.value;
            error += p.error;
        }
    }
}

QuadResult integrate_upper_tail(const Integrand& f, double lo, const QuadSpec& spec) {
    spec.validate();
    if (!std::isfinite(lo)) throw std::domain_error("integrate_upper_tail: lo must be finite");

    const double cutoff = spec.abs_tol / 10.0;
    double step = 0.5;
    double hi = lo + step;
    for (int probe = 0;; ++probe) {
        if (std::abs(f(hi)) < cutoff && std::abs(f(hi + 0.5 * step)) < cutoff) break;
        if (probe > 60) {
            throw QuadratureError("integrate_upper_tail: integrand does not decay", 0.0,
                                  std::numeric_limits<double>::infinity());
        }
        step *= 1.5;
        hi = lo + step;
    }
    return integrate_detailed(f, lo, hi, spec);
}

}  // namespace ztpgini
