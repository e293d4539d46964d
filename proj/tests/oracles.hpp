#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library (Boost.Math special functions, quadrature,
// long-double brute force) so that agreement is meaningful.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace oracle {

/// ln Gamma(n) for a positive integer n by direct summation of ln k.
inline long double log_factorial_minus_one(int n) {
  long double s = 0.0L;
  for (int k = 2; k < n; ++k) s += std::log(static_cast<long double>(k));
  return s;
}

/// Erlang(N) CDF via the regularized lower incomplete gamma.
inline double erlang_cdf(int n, double x) { return boost::math::gamma_p(static_cast<double>(n), x); }

/// Stage-1 SINR CDF in its incomplete-gamma form:
///   1 - sum_{k<N} (g/a1)^k e^{1/(rho a2)} Q(k+1, D/rho) / (a2 D^{k+1}),
///   D = g/a1 + 1/a2.
/// Evaluated in long double logs so the e^{1/(rho a2)} factor and the small
/// Q values do not over- or underflow.
inline double cdf1_gamma_form(int n, double rho, double a1, double g) {
  using LD = long double;
  const LD a2 = 1.0L - a1;
  const LD d = g / a1 + 1.0L / a2;
  const LD c = d / rho;
  LD head = 0.0L;
  for (int k = 0; k < n; ++k) {
    const LD q = boost::math::gamma_q(static_cast<LD>(k + 1), c);
    if (q == 0.0L) continue;
    const LD log_term = k * std::log(static_cast<LD>(g) / a1) + 1.0L / (rho * a2) + std::log(q) -
                        std::log(a2) - (k + 1) * std::log(d);
    head += std::exp(log_term);
  }
  return static_cast<double>(1.0L - head);
}

/// Stage-1 SINR CDF by numerical integration over the interference power:
///   F = int_0^inf P_N((y g + g/rho) / a1) e^{-y/a2} / a2 dy.
inline double cdf1_quadrature(int n, double rho, double a1, double g) {
  const double a2 = 1.0 - a1;
  auto integrand = [&](double y) {
    return boost::math::gamma_p(static_cast<double>(n), (y * g + g / rho) / a1) * std::exp(-y / a2) / a2;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

/// Rayleigh crossing rate of an Erlang(N)-scaled SNR: sqrt(2 pi) f x^{N-1/2} e^{-x} / Gamma(N).
inline double lcr_erlang(int n, double f, double x) {
  return std::sqrt(2.0 * M_PI) * f * std::pow(x, n - 0.5) * std::exp(-x) / std::tgamma(n);
}

}  // namespace oracle

namespace oracle {

/// Stage-1 crossing rate by Rice's formula, integrating over the interference
/// power Y ~ Exp(1). The signal power X ~ Gamma(N) has time derivative
/// N(0, 4 pi^2 f1^2 X) given X; Y likewise with f2. The direction of the
/// combining vector is held fixed, matching the closed form's model.
inline double lcr1_rice(int n, double rho, double a1, double g, double f1, double f2) {
  const double a2 = 1.0 - a1;
  const double two_pi = 2.0 * M_PI;
  auto integrand = [&](double y) {
    const double den = rho * a2 * y + 1.0;
    const double x = g * den / (rho * a1);
    const double log_px = (n - 1) * std::log(x) - x - std::lgamma(static_cast<double>(n));
    const double dg_dx = g / x;
    const double dg_dy = g * rho * a2 / den;
    const double var = dg_dx * dg_dx * two_pi * two_pi * f1 * f1 * x + dg_dy * dg_dy * two_pi * two_pi * f2 * f2 * y;
    return std::exp(-y + log_px) * (x / g) * std::sqrt(var) / std::sqrt(two_pi);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

}  // namespace oracle
