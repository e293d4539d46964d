#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace noma {

/// Raised when a configuration violates one of its invariants. The message
/// names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Maximum Doppler frequency of one user's channel paths, optionally
/// remembering the speed and carrier it was derived from.
class MobilityProfile {
 public:
  MobilityProfile() = default;

  static MobilityProfile from_doppler(double doppler_hz);
  /// doppler = speed / (c / carrier).
  static MobilityProfile from_speed(double speed_mps, double carrier_hz);
  static MobilityProfile from_speed_kmh(double speed_kmh, double carrier_hz) {
    return from_speed(speed_kmh / 3.6, carrier_hz);
  }

  double doppler_hz() const { return doppler_hz_; }
  std::optional<double> speed_mps() const { return speed_mps_; }
  std::optional<double> carrier_hz() const { return carrier_hz_; }

  bool operator==(const MobilityProfile&) const = default;

 private:
  double doppler_hz_ = 0.0;
  std::optional<double> speed_mps_;
  std::optional<double> carrier_hz_;
};

/// Plain aggregate used to build a SystemConfig.
struct SystemParams {
  int n_antennas = 1;
  double alpha1 = 0.5;
  double snr_linear = 1.0;  // p / N0
  double gamma_th = 1.0;
  double t_packet_s = 1e-3;
  MobilityProfile mobility_u1;
  MobilityProfile mobility_u2;
};

/// Validated, immutable link configuration. Only the ratio p/N0 is kept; the
/// simulator uses N0 = 1 and p = snr_linear.
class SystemConfig {
 public:
  explicit SystemConfig(const SystemParams& params);

  int n_antennas() const { return p_.n_antennas; }
  double alpha1() const { return p_.alpha1; }
  double alpha2() const { return 1.0 - p_.alpha1; }
  double snr_linear() const { return p_.snr_linear; }
  double gamma_th() const { return p_.gamma_th; }
  double t_packet_s() const { return p_.t_packet_s; }
  const MobilityProfile& mobility_u1() const { return p_.mobility_u1; }
  const MobilityProfile& mobility_u2() const { return p_.mobility_u2; }
  double doppler1_hz() const { return p_.mobility_u1.doppler_hz(); }
  double doppler2_hz() const { return p_.mobility_u2.doppler_hz(); }
  double max_doppler_hz() const;

  const SystemParams& params() const { return p_; }

  SystemConfig with_alpha1(double alpha1) const;
  SystemConfig with_gamma_th(double gamma_th) const;
  SystemConfig with_snr_linear(double snr_linear) const;
  SystemConfig with_n_antennas(int n) const;
  SystemConfig with_t_packet(double t_packet_s) const;
  SystemConfig with_doppler(double f1_hz, double f2_hz) const;

  bool operator==(const SystemConfig& other) const;

 private:
  SystemParams p_;
};

/// A packet error probability split into its outage floor and the extra
/// penalty caused by channel time variation.
struct PerBreakdown {
  double total = 0.0;
  double outage_term = 0.0;  // F(gamma_th)
  double lcr_penalty = 0.0;  // Tp * LCR(gamma_th)
  bool degenerate = false;   // 1 - F underflowed; total forced to 1
};

double db_to_linear(double db);

}  // namespace noma
