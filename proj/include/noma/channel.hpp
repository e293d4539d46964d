#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "noma/config.hpp"

namespace noma {

using Complex = std::complex<double>;
/// [time x antenna] channel samples, one row per sampling instant.
using ChannelMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sum-of-cisoids generator settings.
struct SosParams {
  int num_sinusoids = 32;
  double sample_rate_hz = 0.0;
  std::uint64_t seed = 1;

  /// 64 samples per Doppler cycle, raised to at least 32 samples per packet.
  static SosParams defaults_for(const SystemConfig& cfg, std::uint64_t seed = 1);

  /// Throws ConfigError if num_sinusoids < 8 or the sample rate is below
  /// 32 x max(f1, f2).
  void validate(const SystemConfig& cfg) const;
};

/// Time-sampled channel vectors of both users over one observation window.
struct FadingTrajectory {
  ChannelMatrix samples_u1;
  ChannelMatrix samples_u2;
  double sample_period_s = 0.0;

  std::size_t num_samples() const { return static_cast<std::size_t>(samples_u1.rows()); }
  int n_antennas() const { return static_cast<int>(samples_u1.cols()); }
};

/// Monte-Carlo estimate of a probability or a rate.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t num_trials = 0;
};

McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials);

/// Seed of the i-th independent stream under a master seed (SplitMix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Number of samples covering [0, duration] inclusive at the given rate.
std::size_t samples_for(double duration_s, double sample_rate_hz);

/// Rayleigh fading paths as sums of M cisoids with Doppler frequencies
/// f cos(alpha_m), alpha_m = (m - 1/2) pi / M, and i.i.d. CN(0, 1/M) gains.
///
/// Each draw is an exactly Gaussian process with autocorrelation
/// (1/M) sum_m cos(2 pi f tau cos alpha_m), a midpoint-rule approximation
/// of J0(2 pi f tau). Gains are redrawn per trajectory, so a single
/// trajectory is not ergodic: time averages over one draw fluctuate by
/// about 1/sqrt(M). Ensemble statistics must pool independent draws.
class SosChannel {
 public:
  SosChannel(const SystemConfig& cfg, const SosParams& sos, std::size_t num_samples);

  FadingTrajectory draw(std::uint64_t seed) const;
  void draw_into(std::uint64_t seed, FadingTrajectory& out) const;

  std::size_t num_samples() const { return static_cast<std::size_t>(phasors_u1_.rows()); }

 private:
  Eigen::MatrixXcd phasors_u1_;  // [time x sinusoid], pre-scaled by 1/sqrt(M)
  Eigen::MatrixXcd phasors_u2_;
  int n_antennas_;
  int num_sinusoids_;
  double sample_period_s_;
};

/// One trajectory of `duration_s` seeded by sos.seed.
FadingTrajectory generate_trajectory(const SystemConfig& cfg, const SosParams& sos,
                                     double duration_s);

struct SinrSeries {
  std::vector<double> gamma1;
  std::vector<double> gamma2;
};

/// SIC receiver output per sample, with N0 = 1 and p = snr_linear:
///   gamma1 = p a1 ||h1||^2 / (p a2 |v1^H h2|^2 + 1),  v1 = h1 / ||h1||
///   gamma2 = p a2 ||h2||^2
SinrSeries sinr_trajectories(const FadingTrajectory& traj, const SystemConfig& cfg);

/// Fraction of values strictly below `threshold`.
McEstimate estimate_cdf(std::span<const double> values, double threshold);

/// Down-crossings of `threshold` per second. The standard error comes from a
/// block bootstrap over at least 20 contiguous blocks (fewer only when the
/// series has fewer transitions).
McEstimate estimate_lcr(std::span<const double> series, double sample_period_s,
                        double threshold);

/// Crossing rate pooled over independent segments; crossings are never
/// counted across segment boundaries. Standard error from the spread of
/// per-segment counts.
McEstimate estimate_lcr_pooled(std::span<const std::vector<double>> segments,
                               double sample_period_s, double threshold);

/// Per-packet event counts. Integer-valued so that merging batches is exact.
struct PacketCounts {
  std::uint64_t packets = 0;
  std::uint64_t stage1_errors = 0;
  std::uint64_t stage2_conditioned = 0;  // packets with no stage-1 error
  std::uint64_t stage2_cond_errors = 0;
  std::uint64_t stage2_any_errors = 0;   // stage-2 threshold violated, any packet
  std::uint64_t unconditional_errors = 0;
  std::uint64_t outage1 = 0;  // gamma1 < threshold at the first sample
  std::uint64_t outage2 = 0;
  std::uint64_t crossings1 = 0;
  std::uint64_t crossings1_sq = 0;
  std::uint64_t crossings2 = 0;
  std::uint64_t crossings2_sq = 0;

  PacketCounts& operator+=(const PacketCounts& o);
  bool operator==(const PacketCounts&) const = default;
};

/// Packet-level Monte-Carlo result.
struct PerSimulation {
  McEstimate stage1;
  McEstimate stage2_conditional;
  McEstimate stage2_unconditional;
  McEstimate outage1;  // instantaneous outage at packet start
  McEstimate outage2;
  McEstimate lcr1;     // pooled down-crossing rates within packets
  McEstimate lcr2;
  PacketCounts counts;
  double packet_window_s = 0.0;
  bool low_confidence = false;  // fewer than kMinConditioning stage-2 trials
};

inline constexpr std::uint64_t kMinConditioning = 100;

/// Simulates `num_packets` independent packets of duration Tp. A packet is in
/// error at stage i iff gamma_i(t) < gamma_th at any sample in the packet.
///
/// Packet k always uses derive_seed(sos.seed, k), so the packets can be split
/// into `batches` concurrent workers and the merged result is identical for
/// every batch count.
PerSimulation simulate_per(const SystemConfig& cfg, const SosParams& sos,
                           std::uint64_t num_packets, int batches = 1);

PerSimulation summarize(const PacketCounts& counts, double packet_window_s);

/// CSV dump of a trajectory: a metadata line `sample_period_s=...,seed=...,n_antennas=...`,
/// a column header, then one row per sample with user-1 antennas 0..N-1
/// followed by user-2 antennas, each as `re,im`.
void write_trajectory_csv(std::ostream& os, const FadingTrajectory& traj, std::uint64_t seed);

}  // namespace noma
