#pragma once

// Special-function kernels used by the closed-form PER expressions.
//
// Everything here works in the log domain where it matters: the CDF and LCR
// sums run up to N = 128 antennas, where k! and x^k overflow a double long
// before the terms themselves become negligible.

namespace noma {

/// ln Gamma(a) for a > 0. Throws std::domain_error otherwise.
double log_gamma(double a);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
///
/// Series expansion of P(a, x) below x = a + 1, modified Lentz continued
/// fraction for Q above it. Absolute error stays below 1e-12 for
/// a in [0.5, 200], x in [0, 10a].
double upper_gamma_regularized(double a, double x);

/// ln Gamma(a, x) (non-regularized). Finite even when Gamma(a, x) itself
/// would under- or overflow, e.g. for the Gamma(l + 3/2, beta) factors of the
/// stage-1 LCR with very large or very small beta.
double log_upper_gamma(double a, double x);

/// Erlang CDF 1 - e^{-x} sum_{k<n} x^k / k!, i.e. the CDF of a sum of n unit
/// exponentials at x.
///
/// Below the mean (x < n) the complementary tail sum_{k>=n} is accumulated
/// directly so that small probabilities keep full relative precision.
double erlang_sum_cdf(int n, double x);

/// ln(e^a + e^b) without overflow. Either argument may be -inf.
double log_add_exp(double a, double b);

}  // namespace noma
