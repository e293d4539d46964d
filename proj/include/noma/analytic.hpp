#pragma once

#include "noma/config.hpp"

namespace noma {

/// The two successive-interference-cancellation detection stages.
enum class Stage { Stage1, Stage2 };

// ---------------------------------------------------------------------------
// First-order statistics
// ---------------------------------------------------------------------------

/// CDF of the stage-1 SINR
///   gamma1 = p a1 ||h1||^2 / (p a2 |v1^H h2|^2 + N0),  v1 = h1 / ||h1||
/// at `gamma_th`, from the finite double sum over k < N, l <= k.
///
/// When the result is small the complementary sum over k >= N is used
/// instead of 1 - (head sum), so outage values far below 1e-16 stay exact.
double cdf_gamma1(const SystemConfig& cfg, double gamma_th);

/// CDF of the stage-2 SNR gamma2 = (p a2 / N0) ||h2||^2, an Erlang(N) law.
double cdf_gamma2(const SystemConfig& cfg, double gamma_th);

// ---------------------------------------------------------------------------
// Level crossing rates (crossings per second)
// ---------------------------------------------------------------------------

/// LCR of gamma1 for Doppler pair (f1, f2). Handles f1 = 0 through its
/// closed-form limit; returns 0 when both users are static.
///
/// The expression treats |v1^H h2|^2 as fading with user 2's Doppler only. It
/// does not include the extra variation that the rotation of v1(t) injects
/// into the interference term, so for N >= 2 it underestimates the crossing
/// rate of a simulated gamma1(t). It is exact for N = 1.
double lcr_gamma1(const SystemConfig& cfg, double gamma_th);

/// LCR of gamma2: sqrt(2 pi) f2 x^{N - 1/2} e^{-x} / Gamma(N), x = gamma_th N0 / (p a2).
double lcr_gamma2(const SystemConfig& cfg, double gamma_th);

double cdf(Stage stage, const SystemConfig& cfg, double gamma_th);
double lcr(Stage stage, const SystemConfig& cfg, double gamma_th);

// ---------------------------------------------------------------------------
// Packet error rates
// ---------------------------------------------------------------------------

/// Two-state Markov packet error probability
///   1 - exp(-Tp LCR / (1 - F)) (1 - F)
/// written as F + (1 - F)(1 - exp(-z)) to keep small PERs accurate.
PerBreakdown markov_per(double outage, double lcr_hz, double t_packet_s);

PerBreakdown per_stage1(const SystemConfig& cfg);

/// Stage-2 PER given stage 1 decoded correctly.
PerBreakdown per_stage2_conditional(const SystemConfig& cfg);

struct UnionBound {
  double raw = 0.0;      // per_stage1 + per_stage2_conditional, may exceed 1
  double clamped = 0.0;  // min(raw, 1)
  bool degenerate = false;
};

/// Union bound on the unconditional stage-2 PER.
UnionBound per_stage2_bound(const SystemConfig& cfg);

/// Short-packet / high-SNR approximation F1 + Tp LCR1.
double per_stage1_asymptotic(const SystemConfig& cfg);

/// F1 + F2 + Tp (LCR1 + LCR2).
double per_stage2_asymptotic(const SystemConfig& cfg);

}  // namespace noma
