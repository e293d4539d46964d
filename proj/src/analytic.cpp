#include "noma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "noma/special.hpp"

namespace noma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxTailTerms = 2'000'000;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_threshold(double gamma_th, bool allow_zero, const char* who) {
  const bool ok = std::isfinite(gamma_th) && (allow_zero ? gamma_th >= 0.0 : gamma_th > 0.0);
  if (!ok) {
    throw std::domain_error(std::string(who) + ": threshold must be " +
                            (allow_zero ? ">= 0" : "> 0") + ", got " + std::to_string(gamma_th));
  }
}

}  // namespace

double cdf_gamma1(const SystemConfig& cfg, double gamma_th) {
  require_threshold(gamma_th, true, "cdf_gamma1");
  if (gamma_th == 0.0) return 0.0;

  const int n = cfg.n_antennas();
  const double rho = cfg.snr_linear();
  const double a1 = cfg.alpha1();
  const double a2 = cfg.alpha2();

  // Term (k, l) = (g/a1)^k e^{-a} (D/rho)^l / (l! a2 D^{k+1}); rows are summed
  // over l incrementally. Summed over all k >= 0 the rows total exactly 1.
  const double a = gamma_th / (rho * a1);
  const double d = gamma_th / a1 + 1.0 / a2;
  const double log_r = std::log(gamma_th / a1) - std::log(d);
  const double log_c = std::log(d) - std::log(rho);
  const double c = d / rho;
  const double log_front = -a - std::log(a2 * d);

  double log_inner = kNegInf;
  auto row = [&](int k) {
    log_inner = log_add_exp(log_inner, k * log_c - log_gamma(k + 1.0));
    return std::exp(log_front + k * log_r + log_inner);
  };

  double head = 0.0;
  for (int k = 0; k < n; ++k) head += row(k);
  if (head <= 0.5) return std::clamp(1.0 - head, 0.0, 1.0);

  double tail = 0.0;
  for (int k = n; k < n + kMaxTailTerms; ++k) {
    const double term = row(k);
    tail += term;
    if (k > c + 1.0 && term <= tail * 1e-18) return std::clamp(tail, 0.0, 1.0);
  }
  return std::clamp(1.0 - head, 0.0, 1.0);
}

double cdf_gamma2(const SystemConfig& cfg, double gamma_th) {
  require_threshold(gamma_th, true, "cdf_gamma2");
  return erlang_sum_cdf(cfg.n_antennas(), gamma_th / (cfg.snr_linear() * cfg.alpha2()));
}

double lcr_gamma1(const SystemConfig& cfg, double gamma_th) {
  require_threshold(gamma_th, false, "lcr_gamma1");
  const double f1 = cfg.doppler1_hz();
  const double f2 = cfg.doppler2_hz();
  if (f1 == 0.0 && f2 == 0.0) return 0.0;

  const int n = cfg.n_antennas();
  const double rho = cfg.snr_linear();
  const double a1 = cfg.alpha1();
  const double a2 = cfg.alpha2();
  const double s = gamma_th / (rho * a1);

  if (f1 == 0.0) {
    // Only the interference term moves:
    // sqrt(2pi) g b f2 e^{-g d} / Gamma(N) sum_j C(N-1, j) (g d)^{N-1-j} (g b)^j
    //   Gamma(j + 3/2) / (1 + g b)^{j + 3/2},   b = a2 / a1, d = 1 / (rho a1)
    const double gb = gamma_th * a2 / a1;
    double log_sum = kNegInf;
    for (int j = 0; j < n; ++j) {
      const double log_binom = log_gamma(n) - log_gamma(j + 1.0) - log_gamma(n - j);
      log_sum = log_add_exp(log_sum, log_binom + (n - 1 - j) * std::log(s) + j * std::log(gb) +
                                         log_gamma(j + 1.5) - (j + 1.5) * std::log1p(gb));
    }
    return std::exp(kLogSqrt2Pi + std::log(gb * f2) - s - log_gamma(n) + log_sum);
  }

  const double ratio = f2 / f1;
  const double q = gamma_th * a2 * ratio * ratio / a1;
  const double beta =
      (a1 + a2 * gamma_th) / (a2 * rho * (a1 + a2 * ratio * ratio * gamma_th));

  // The exponential enters as e^{+beta}. Written with e^{-1/beta} in the
  // denominator the expression collapses to ~0 at high SNR and no longer
  // reduces to the single-user Rayleigh LCR as a2 -> 0.
  const double log_prefix = kLogSqrt2Pi + std::log(f1) + (n - 0.5) * std::log(s) - s + beta -
                            (n - 1) * std::log1p(q) - std::log1p(gamma_th * a2 / a1);

  const double log_beta = std::log(beta);
  double log_sum = kNegInf;
  for (int l = 0; l < n; ++l) {
    const int power = n - l - 1;
    if (power > 0 && q == 0.0) continue;
    const double log_q_term = power > 0 ? power * std::log(q) : 0.0;
    log_sum = log_add_exp(log_sum, log_q_term + log_upper_gamma(l + 1.5, beta) -
                                       log_gamma(l + 1.0) - log_gamma(power + 1.0) -
                                       (l + 0.5) * log_beta);
  }
  return std::exp(log_prefix + log_sum);
}

double lcr_gamma2(const SystemConfig& cfg, double gamma_th) {
  require_threshold(gamma_th, false, "lcr_gamma2");
  const double f2 = cfg.doppler2_hz();
  if (f2 == 0.0) return 0.0;
  const int n = cfg.n_antennas();
  const double x = gamma_th / (cfg.snr_linear() * cfg.alpha2());
  return f2 * std::exp(kLogSqrt2Pi + (n - 0.5) * std::log(x) - x - log_gamma(n));
}

double cdf(Stage stage, const SystemConfig& cfg, double gamma_th) {
  return stage == Stage::Stage1 ? cdf_gamma1(cfg, gamma_th) : cdf_gamma2(cfg, gamma_th);
}

double lcr(Stage stage, const SystemConfig& cfg, double gamma_th) {
  return stage == Stage::Stage1 ? lcr_gamma1(cfg, gamma_th) : lcr_gamma2(cfg, gamma_th);
}

PerBreakdown markov_per(double outage, double lcr_hz, double t_packet_s) {
  PerBreakdown out;
  out.outage_term = outage;
  out.lcr_penalty = t_packet_s * lcr_hz;
  const double survive = 1.0 - outage;
  if (survive < 1e-300) {
    out.total = 1.0;
    out.degenerate = true;
    return out;
  }
  const double z = out.lcr_penalty / survive;
  out.total = std::clamp(outage + survive * -std::expm1(-z), 0.0, 1.0);
  return out;
}

PerBreakdown per_stage1(const SystemConfig& cfg) {
  const double g = cfg.gamma_th();
  return markov_per(cdf_gamma1(cfg, g), lcr_gamma1(cfg, g), cfg.t_packet_s());
}

PerBreakdown per_stage2_conditional(const SystemConfig& cfg) {
  const double g = cfg.gamma_th();
  return markov_per(cdf_gamma2(cfg, g), lcr_gamma2(cfg, g), cfg.t_packet_s());
}

UnionBound per_stage2_bound(const SystemConfig& cfg) {
  const PerBreakdown s1 = per_stage1(cfg);
  const PerBreakdown s2 = per_stage2_conditional(cfg);
  UnionBound b;
  b.raw = s1.total + s2.total;
  b.clamped = std::min(b.raw, 1.0);
  b.degenerate = s1.degenerate || s2.degenerate;
  return b;
}

double per_stage1_asymptotic(const SystemConfig& cfg) {
  const double g = cfg.gamma_th();
  return cdf_gamma1(cfg, g) + cfg.t_packet_s() * lcr_gamma1(cfg, g);
}

double per_stage2_asymptotic(const SystemConfig& cfg) {
  const double g = cfg.gamma_th();
  return per_stage1_asymptotic(cfg) + cdf_gamma2(cfg, g) + cfg.t_packet_s() * lcr_gamma2(cfg, g);
}

}  // namespace noma
