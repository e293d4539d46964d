#include "noma/config.hpp"

#include <algorithm>
#include <cmath>

namespace noma {
namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate(const SystemParams& p) {
  check(p.n_antennas >= 1, "n_antennas must be >= 1");
  check(std::isfinite(p.alpha1) && p.alpha1 > 0.0 && p.alpha1 < 1.0,
        "alpha1 must lie in the open interval (0, 1)");
  check(std::isfinite(p.snr_linear) && p.snr_linear > 0.0, "snr_linear must be finite and > 0");
  check(std::isfinite(p.gamma_th) && p.gamma_th > 0.0, "gamma_th must be finite and > 0");
  check(std::isfinite(p.t_packet_s) && p.t_packet_s > 0.0, "t_packet_s must be finite and > 0");
}

}  // namespace

MobilityProfile MobilityProfile::from_doppler(double doppler_hz) {
  check(std::isfinite(doppler_hz) && doppler_hz >= 0.0, "doppler_hz must be finite and >= 0");
  MobilityProfile m;
  m.doppler_hz_ = doppler_hz;
  return m;
}

MobilityProfile MobilityProfile::from_speed(double speed_mps, double carrier_hz) {
  check(std::isfinite(speed_mps) && speed_mps >= 0.0, "speed must be finite and >= 0");
  check(std::isfinite(carrier_hz) && carrier_hz > 0.0, "carrier frequency must be finite and > 0");
  const double wavelength = kSpeedOfLight / carrier_hz;
  MobilityProfile m = from_doppler(speed_mps / wavelength);
  m.speed_mps_ = speed_mps;
  m.carrier_hz_ = carrier_hz;
  return m;
}

SystemConfig::SystemConfig(const SystemParams& params) : p_(params) { validate(p_); }

double SystemConfig::max_doppler_hz() const { return std::max(doppler1_hz(), doppler2_hz()); }

SystemConfig SystemConfig::with_alpha1(double alpha1) const {
  SystemParams p = p_;
  p.alpha1 = alpha1;
  return SystemConfig(p);
}

SystemConfig SystemConfig::with_gamma_th(double gamma_th) const {
  SystemParams p = p_;
  p.gamma_th = gamma_th;
  return SystemConfig(p);
}

SystemConfig SystemConfig::with_snr_linear(double snr_linear) const {
  SystemParams p = p_;
  p.snr_linear = snr_linear;
  return SystemConfig(p);
}

SystemConfig SystemConfig::with_n_antennas(int n) const {
  SystemParams p = p_;
  p.n_antennas = n;
  return SystemConfig(p);
}

SystemConfig SystemConfig::with_t_packet(double t_packet_s) const {
  SystemParams p = p_;
  p.t_packet_s = t_packet_s;
  return SystemConfig(p);
}

SystemConfig SystemConfig::with_doppler(double f1_hz, double f2_hz) const {
  SystemParams p = p_;
  p.mobility_u1 = MobilityProfile::from_doppler(f1_hz);
  p.mobility_u2 = MobilityProfile::from_doppler(f2_hz);
  return SystemConfig(p);
}

bool SystemConfig::operator==(const SystemConfig& other) const {
  const SystemParams& a = p_;
  const SystemParams& b = other.p_;
  return a.n_antennas == b.n_antennas && a.alpha1 == b.alpha1 && a.snr_linear == b.snr_linear &&
         a.gamma_th == b.gamma_th && a.t_packet_s == b.t_packet_s &&
         a.mobility_u1 == b.mobility_u1 && a.mobility_u2 == b.mobility_u2;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace noma
