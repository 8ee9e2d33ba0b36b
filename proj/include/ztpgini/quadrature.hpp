#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace ztpgini {

/// Tolerances and refinement cap shared by every numeric integral in the
/// library. A result is accepted once its estimated error is at most
/// max(abs_tol, rel_tol * |result|).
struct QuadSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 40;

    /// Throws std::invalid_argument on non-positive tolerances or depth.
    void validate() const;
};

/// Raised when adaptive refinement is exhausted before the error target is
/// met. Carries the best estimate and its error bound.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int segments = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature on a finite interval.
/// The error estimate of a panel is |K21 - G10|; the panel with the largest
/// estimate is bisected until the total estimate meets the target.
QuadResult integrate_detailed(const Integrand& f, double lo, double hi, const QuadSpec& spec = {});

inline double integrate(const Integrand& f, double lo, double hi, const QuadSpec& spec = {}) {
    return integrate_detailed(f, lo, hi, spec).value;
}

/// Integral over [lo, inf) of an integrand that decays beyond lo. The upper
/// limit is truncated at the first point of a geometric scan where |f| drops
/// below abs_tol / 10 (checked on two consecutive probes).
QuadResult integrate_upper_tail(const Integrand& f, double lo, const QuadSpec& spec = {});

}  // namespace ztpgini
