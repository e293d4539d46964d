#include "noma/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace noma {
namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;

void require_shape(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("gamma kernel: shape must be finite and > 0, got " + std::to_string(a));
  }
}

void require_argument(double x) {
  if (!(x >= 0.0) || std::isnan(x)) {
    throw std::domain_error("gamma kernel: argument must be >= 0, got " + std::to_string(x));
  }
}

// Lower regularized P(a, x) by its power series. Valid (fast) for x < a + 1.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(a * std::log(x) - x - log_gamma(a));
}

// ln Q(a, x) by modified Lentz evaluation of the continued fraction. x >= a + 1.
double log_upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return -x + a * std::log(x) - log_gamma(a) + std::log(h);
}

}  // namespace

double log_gamma(double a) {
  require_shape(a);
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(a, &sign);  // reentrant: std::lgamma writes the global signgam
#else
  return std::lgamma(a);
#endif
}

double upper_gamma_regularized(double a, double x) {
  require_shape(a);
  require_argument(x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return std::exp(log_upper_fraction(a, x));
}

double log_upper_gamma(double a, double x) {
  require_shape(a);
  require_argument(x);
  if (x == 0.0) return log_gamma(a);
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) return log_gamma(a) + std::log1p(-lower_series(a, x));
  return log_upper_fraction(a, x) + log_gamma(a);
}

double erlang_sum_cdf(int n, double x) {
  if (n < 1) throw std::domain_error("erlang_sum_cdf: n must be >= 1, got " + std::to_string(n));
  require_argument(x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;

  const double log_x = std::log(x);
  if (x < n) {
    // Tail sum_{k>=n} e^{-x} x^k / k!, terms decay once k > x.
    double term = std::exp(n * log_x - x - log_gamma(n + 1.0));
    double sum = term;
    for (int k = n + 1; k < n + kMaxIterations; ++k) {
      term *= x / k;
      sum += term;
      if (term < sum * kEps) break;
    }
    return std::min(sum, 1.0);
  }

  // Head sum_{k<n}, walked downward from its largest term k = n - 1.
  double term = std::exp((n - 1) * log_x - x - log_gamma(static_cast<double>(n)));
  double sum = term;
  for (int k = n - 1; k >= 1; --k) {
    term *= k / x;
    sum += term;
    if (term < sum * kEps) break;
  }
  return std::max(0.0, 1.0 - sum);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace noma
