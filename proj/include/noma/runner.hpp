#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noma/channel.hpp"
#include "noma/config.hpp"

namespace noma {

/// Malformed configuration text. Carries the 1-based line number (0 when the
/// problem is not tied to a line) and the key involved.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(int line, std::string key, const std::string& what);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class SweepVariable { Alpha1, SnrDb, GammaTh, NAntennas, DopplerHz };

enum class Output {
  Per1,
  Per2Cond,
  Per2Bound,
  Per1Asym,
  Per2Asym,
  Cdf1,
  Cdf2,
  Lcr1,
  Lcr2,
  McPer1,
  McPer2Cond,
  McPer2Uncond,
};

std::string_view to_string(SweepVariable v);
std::string_view to_string(Output o);
SweepVariable parse_sweep_variable(std::string_view s);
Output parse_output(std::string_view s);
bool is_monte_carlo(Output o);

struct SweepSection {
  SweepVariable variable = SweepVariable::Alpha1;
  std::vector<double> grid;
  std::vector<Output> outputs;
  /// Optional second axis; each series value gets a full pass over `grid`.
  std::optional<SweepVariable> series_variable;
  std::vector<double> series;

  bool operator==(const SweepSection&) const = default;
};

/// A configuration document as written in a config file. Keeps the
/// user-facing units (dB, ms, km/h, GHz) so that dumping and reloading
/// reproduces it exactly.
struct RunConfig {
  int n_antennas = 2;
  double alpha1 = 0.5;
  double snr_db = 30.0;
  double gamma_th = 1.0;
  double t_packet_ms = 1.0;
  std::optional<double> doppler1_hz;
  std::optional<double> doppler2_hz;
  std::optional<double> speed1_kmh;
  std::optional<double> speed2_kmh;
  std::optional<double> carrier_ghz;
  std::uint64_t seed = 1;
  std::uint64_t num_packets = 100'000;
  int num_sinusoids = 32;
  std::optional<double> sample_rate_hz;
  std::optional<SweepSection> sweep;

  /// Validated link configuration (dB -> linear, ms -> s, speed -> Doppler).
  SystemConfig system() const;
  /// Generator settings; the sample rate defaults per SosParams::defaults_for.
  SosParams sos() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines; `#` starts a comment. Keys:
///   n_antennas, alpha1, snr_db, gamma_th, t_packet_ms,
///   doppler1_hz | speed1_kmh + carrier_ghz, doppler2_hz | speed2_kmh,
///   seed, num_packets, num_sinusoids, sample_rate_hz,
///   sweep.variable, sweep.grid, sweep.outputs, sweep.series_variable, sweep.series
/// Grids are comma lists or `start:stop:count` (inclusive linear spacing).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Emits text that parse_config maps back to an identical RunConfig.
std::string dump_config(const RunConfig& cfg);

/// Built-in presets "fig1" and "fig2". Throws std::invalid_argument otherwise.
RunConfig preset(std::string_view name);

/// One CSV row per grid point (per series value, if any). Columns: the series
/// variable if present, the swept variable, then each requested output in
/// order, with `<name>_se` after every Monte-Carlo output. A trailing `error`
/// column appears only when at least one row failed; failed rows carry `nan`.
std::string run_sweep(const RunConfig& cfg, int batches = 1);

enum class CheckStatus { Pass, Fail, LowConfidence };

struct ValidationRow {
  std::string quantity;
  double analytic = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::string tolerance;
  CheckStatus status = CheckStatus::Pass;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::uint64_t num_packets = 0;
  bool low_confidence = false;

  /// 0 all pass, 1 any failure, 2 no failure but low-confidence rows.
  int exit_code() const;
  std::string render() const;
};

/// Compares every closed form against its Monte-Carlo counterpart:
/// outage probabilities and PERs within 3 standard errors, crossing rates
/// within 5 % relative, and the union bound against the unconditional
/// stage-2 error frequency (one-sided, 3 standard errors).
ValidationReport run_validation(const SystemConfig& cfg, const SosParams& sos,
                                std::uint64_t num_packets, int batches = 1);

/// Shortest round-trip decimal form, no locale.
std::string format_number(double v);

}  // namespace noma
