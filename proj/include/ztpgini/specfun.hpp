#pragma once

#include "ztpgini/quadrature.hpp"

namespace ztpgini::specfun {

/// ln Gamma(x) for x > 0. Stirling series above x = 10, upward recurrence below.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double reg_lower_gamma(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x).
double reg_upper_gamma(double s, double x);

/// Modified Bessel function of the first kind, order 0 or 1.
double bessel_i(int order, double z);

/// exp(-z) * I_order(z); finite for every z >= 0.
double bessel_i_scaled(int order, double z);

/// Marcum Q_1(a, a) from the closed identity (exp(-a^2) I_0(a^2) + 1) / 2.
double marcum_q1_equal(double a);

/// Marcum Q_1(a, b) by quadrature of its defining integral. Slow; kept as a
/// cross-check for marcum_q1_equal.
double marcum_q1_numeric(double a, double b, const QuadSpec& spec = {});

}  // namespace ztpgini::specfun
