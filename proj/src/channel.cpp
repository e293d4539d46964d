#include "noma/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace noma {
namespace {

constexpr int kMinBlocks = 20;
constexpr int kBootstrapResamples = 400;

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Eigen::MatrixXcd make_phasors(double doppler_hz, int m, std::size_t num_samples, double ts) {
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(num_samples), m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int k = 0; k < m; ++k) {
    const double angle = (k + 0.5) * std::numbers::pi / m;
    const double omega = 2.0 * std::numbers::pi * doppler_hz * std::cos(angle);
    for (std::size_t t = 0; t < num_samples; ++t) {
      e(static_cast<Eigen::Index>(t), k) = std::polar(scale, omega * ts * static_cast<double>(t));
    }
  }
  return e;
}

// Down-crossings of `threshold` between consecutive samples.
std::uint64_t count_down_crossings(std::span<const double> s, double threshold) {
  std::uint64_t n = 0;
  for (std::size_t t = 0; t + 1 < s.size(); ++t) {
    if (s[t] >= threshold && s[t + 1] < threshold) ++n;
  }
  return n;
}

PacketCounts run_packets(const SystemConfig& cfg, const SosChannel& channel, std::uint64_t seed,
                         std::uint64_t first, std::uint64_t last) {
  PacketCounts c;
  FadingTrajectory traj;
  SinrSeries sinr;
  const double g = cfg.gamma_th();
  for (std::uint64_t k = first; k < last; ++k) {
    channel.draw_into(derive_seed(seed, k), traj);
    sinr = sinr_trajectories(traj, cfg);
    const bool e1 = *std::min_element(sinr.gamma1.begin(), sinr.gamma1.end()) < g;
    const bool e2 = *std::min_element(sinr.gamma2.begin(), sinr.gamma2.end()) < g;
    const std::uint64_t x1 = count_down_crossings(sinr.gamma1, g);
    const std::uint64_t x2 = count_down_crossings(sinr.gamma2, g);
    ++c.packets;
    c.stage1_errors += e1;
    if (!e1) {
      ++c.stage2_conditioned;
      c.stage2_cond_errors += e2;
    }
    c.stage2_any_errors += e2;
    c.unconditional_errors += (e1 || e2);
    c.outage1 += sinr.gamma1.front() < g;
    c.outage2 += sinr.gamma2.front() < g;
    c.crossings1 += x1;
    c.crossings1_sq += x1 * x1;
    c.crossings2 += x2;
    c.crossings2_sq += x2 * x2;
  }
  return c;
}

McEstimate rate_estimate(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n, double window) {
  McEstimate est;
  est.num_trials = n;
  if (n == 0 || window <= 0.0) return est;
  const double dn = static_cast<double>(n);
  const double mean = static_cast<double>(sum) / dn;
  const double var = std::max(0.0, static_cast<double>(sum_sq) / dn - mean * mean);
  est.mean = mean / window;
  est.std_error = std::sqrt(var / dn) / window;
  return est;
}

}  // namespace

McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials) {
  McEstimate est;
  est.num_trials = trials;
  if (trials == 0) return est;
  est.mean = static_cast<double>(successes) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
  return est;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t samples_for(double duration_s, double sample_rate_hz) {
  return static_cast<std::size_t>(std::floor(duration_s * sample_rate_hz * (1.0 + 1e-12))) + 1;
}

SosParams SosParams::defaults_for(const SystemConfig& cfg, std::uint64_t seed) {
  SosParams p;
  p.seed = seed;
  p.sample_rate_hz = std::max(64.0 * cfg.max_doppler_hz(), 32.0 / cfg.t_packet_s());
  return p;
}

void SosParams::validate(const SystemConfig& cfg) const {
  if (num_sinusoids < 8) throw ConfigError("num_sinusoids must be >= 8");
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw ConfigError("sample_rate_hz must be finite and > 0");
  }
  if (sample_rate_hz < 32.0 * cfg.max_doppler_hz()) {
    throw ConfigError("sample_rate_hz must be at least 32 x max Doppler (" +
                      format_double(32.0 * cfg.max_doppler_hz()) + " Hz)");
  }
}

SosChannel::SosChannel(const SystemConfig& cfg, const SosParams& sos, std::size_t num_samples)
    : n_antennas_(cfg.n_antennas()),
      num_sinusoids_(sos.num_sinusoids),
      sample_period_s_(1.0 / sos.sample_rate_hz) {
  sos.validate(cfg);
  if (num_samples < 2) throw ConfigError("a trajectory needs at least 2 samples");
  phasors_u1_ = make_phasors(cfg.doppler1_hz(), num_sinusoids_, num_samples, sample_period_s_);
  phasors_u2_ = make_phasors(cfg.doppler2_hz(), num_sinusoids_, num_samples, sample_period_s_);
}

FadingTrajectory SosChannel::draw(std::uint64_t seed) const {
  FadingTrajectory t;
  draw_into(seed, t);
  return t;
}

void SosChannel::draw_into(std::uint64_t seed, FadingTrajectory& out) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd gains(num_sinusoids_, n_antennas_);
  auto fill = [&] {
    for (Eigen::Index j = 0; j < gains.cols(); ++j) {
      for (Eigen::Index i = 0; i < gains.rows(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        gains(i, j) = Complex(re, im);
      }
    }
  };
  fill();
  out.samples_u1.noalias() = phasors_u1_ * gains;
  fill();
  out.samples_u2.noalias() = phasors_u2_ * gains;
  out.sample_period_s = sample_period_s_;
}

FadingTrajectory generate_trajectory(const SystemConfig& cfg, const SosParams& sos,
                                     double duration_s) {
  sos.validate(cfg);
  if (!(duration_s * sos.sample_rate_hz >= 1.0 - 1e-12)) {
    throw ConfigError("duration must cover at least one sample period");
  }
  return SosChannel(cfg, sos, samples_for(duration_s, sos.sample_rate_hz)).draw(sos.seed);
}

SinrSeries sinr_trajectories(const FadingTrajectory& traj, const SystemConfig& cfg) {
  if (traj.n_antennas() != cfg.n_antennas() || traj.samples_u2.cols() != traj.samples_u1.cols() ||
      traj.samples_u2.rows() != traj.samples_u1.rows()) {
    throw std::invalid_argument("sinr_trajectories: trajectory shape does not match n_antennas");
  }
  const double p = cfg.snr_linear();
  const double a1 = cfg.alpha1();
  const double a2 = cfg.alpha2();
  const std::size_t n = traj.num_samples();
  SinrSeries out;
  out.gamma1.resize(n);
  out.gamma2.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto h1 = traj.samples_u1.row(static_cast<Eigen::Index>(t));
    const auto h2 = traj.samples_u2.row(static_cast<Eigen::Index>(t));
    const double n1 = h1.squaredNorm();
    const double n2 = h2.squaredNorm();
    const double leak = n1 > 0.0 ? std::norm(h1.dot(h2)) / n1 : 0.0;  // |v1^H h2|^2
    out.gamma1[t] = p * a1 * n1 / (p * a2 * leak + 1.0);
    out.gamma2[t] = p * a2 * n2;
  }
  return out;
}

McEstimate estimate_cdf(std::span<const double> values, double threshold) {
  if (values.empty()) throw std::invalid_argument("estimate_cdf: empty input");
  const auto below = std::count_if(values.begin(), values.end(),
                                   [threshold](double v) { return v < threshold; });
  return bernoulli_estimate(static_cast<std::uint64_t>(below), values.size());
}

McEstimate estimate_lcr(std::span<const double> series, double sample_period_s,
                        double threshold) {
  if (series.size() < 2) throw std::invalid_argument("estimate_lcr: need at least 2 samples");
  if (!(sample_period_s > 0.0)) throw std::invalid_argument("estimate_lcr: sample period must be > 0");

  const std::size_t transitions = series.size() - 1;
  const std::size_t blocks = std::min<std::size_t>(kMinBlocks, transitions);
  std::vector<double> block_counts(blocks, 0.0);
  std::vector<double> block_spans(blocks, 0.0);
  for (std::size_t t = 0; t < transitions; ++t) {
    const std::size_t b = t * blocks / transitions;
    block_spans[b] += 1.0;
    if (series[t] >= threshold && series[t + 1] < threshold) block_counts[b] += 1.0;
  }

  const double duration = static_cast<double>(transitions) * sample_period_s;
  McEstimate est;
  est.num_trials = transitions;
  est.mean = count_down_crossings(series, threshold) / duration;

  std::mt19937_64 rng(0x5EEDu);
  std::uniform_int_distribution<std::size_t> pick(0, blocks - 1);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < kBootstrapResamples; ++r) {
    double count = 0.0;
    double span = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
      const std::size_t b = pick(rng);
      count += block_counts[b];
      span += block_spans[b];
    }
    const double rate = count / (span * sample_period_s);
    sum += rate;
    sum_sq += rate * rate;
  }
  const double m = sum / kBootstrapResamples;
  est.std_error = std::sqrt(std::max(0.0, sum_sq / kBootstrapResamples - m * m));
  return est;
}

McEstimate estimate_lcr_pooled(std::span<const std::vector<double>> segments,
                               double sample_period_s, double threshold) {
  if (segments.empty()) throw std::invalid_argument("estimate_lcr_pooled: no segments");
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::uint64_t transitions = 0;
  for (const auto& s : segments) {
    if (s.size() < 2) throw std::invalid_argument("estimate_lcr_pooled: segment shorter than 2");
    const std::uint64_t c = count_down_crossings(s, threshold);
    sum += c;
    sum_sq += c * c;
    transitions += s.size() - 1;
  }
  // Segments may differ in length; the rate uses the pooled duration.
  const double mean_window =
      static_cast<double>(transitions) * sample_period_s / static_cast<double>(segments.size());
  McEstimate est = rate_estimate(sum, sum_sq, segments.size(), mean_window);
  est.num_trials = transitions;
  return est;
}

PacketCounts& PacketCounts::operator+=(const PacketCounts& o) {
  packets += o.packets;
  stage1_errors += o.stage1_errors;
  stage2_conditioned += o.stage2_conditioned;
  stage2_cond_errors += o.stage2_cond_errors;
  stage2_any_errors += o.stage2_any_errors;
  unconditional_errors += o.unconditional_errors;
  outage1 += o.outage1;
  outage2 += o.outage2;
  crossings1 += o.crossings1;
  crossings1_sq += o.crossings1_sq;
  crossings2 += o.crossings2;
  crossings2_sq += o.crossings2_sq;
  return *this;
}

PerSimulation summarize(const PacketCounts& c, double packet_window_s) {
  PerSimulation r;
  r.counts = c;
  r.packet_window_s = packet_window_s;
  r.stage1 = bernoulli_estimate(c.stage1_errors, c.packets);
  r.stage2_conditional = bernoulli_estimate(c.stage2_cond_errors, c.stage2_conditioned);
  r.stage2_unconditional = bernoulli_estimate(c.unconditional_errors, c.packets);
  r.outage1 = bernoulli_estimate(c.outage1, c.packets);
  r.outage2 = bernoulli_estimate(c.outage2, c.packets);
  r.lcr1 = rate_estimate(c.crossings1, c.crossings1_sq, c.packets, packet_window_s);
  r.lcr2 = rate_estimate(c.crossings2, c.crossings2_sq, c.packets, packet_window_s);
  r.low_confidence = c.stage2_conditioned < kMinConditioning;
  return r;
}

PerSimulation simulate_per(const SystemConfig& cfg, const SosParams& sos,
                           std::uint64_t num_packets, int batches) {
  if (num_packets < 1) throw ConfigError("num_packets must be >= 1");
  if (batches < 1) throw ConfigError("batches must be >= 1");
  sos.validate(cfg);
  const double samples_per_packet = cfg.t_packet_s() * sos.sample_rate_hz;
  if (cfg.max_doppler_hz() > 0.0 && samples_per_packet < 32.0 - 1e-9) {
    throw ConfigError("packet is undersampled: Tp x sample_rate must be >= 32 (got " +
                      format_double(samples_per_packet) + ")");
  }
  if (samples_per_packet < 1.0 - 1e-12) {
    throw ConfigError("packet must span at least one sample period");
  }

  const SosChannel channel(cfg, sos, samples_for(cfg.t_packet_s(), sos.sample_rate_hz));
  const double window = static_cast<double>(channel.num_samples() - 1) / sos.sample_rate_hz;

  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(batches, num_packets));
  std::vector<std::future<PacketCounts>> jobs;
  jobs.reserve(workers);
  for (std::uint64_t b = 0; b < workers; ++b) {
    const std::uint64_t first = num_packets * b / workers;
    const std::uint64_t last = num_packets * (b + 1) / workers;
    jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                              [&, first, last] { return run_packets(cfg, channel, sos.seed, first, last); }));
  }
  PacketCounts total;
  for (auto& j : jobs) total += j.get();
  return summarize(total, window);
}

void write_trajectory_csv(std::ostream& os, const FadingTrajectory& traj, std::uint64_t seed) {
  const int n = traj.n_antennas();
  os << "sample_period_s=" << format_double(traj.sample_period_s) << ",seed=" << seed
     << ",n_antennas=" << n << '\n';
  os << "t";
  for (int user = 1; user <= 2; ++user) {
    for (int a = 0; a < n; ++a) os << ",u" << user << "_a" << a << "_re,u" << user << "_a" << a << "_im";
  }
  os << '\n';
  for (std::size_t t = 0; t < traj.num_samples(); ++t) {
    os << format_double(static_cast<double>(t) * traj.sample_period_s);
    for (const ChannelMatrix* m : {&traj.samples_u1, &traj.samples_u2}) {
      for (int a = 0; a < n; ++a) {
        const Complex v = (*m)(static_cast<Eigen::Index>(t), a);
        os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
      }
    }
    os << '\n';
  }
}

}  // namespace noma
