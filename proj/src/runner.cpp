#include "noma/runner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>

#include "noma/analytic.hpp"

namespace noma {
namespace {

constexpr std::array<std::pair<SweepVariable, std::string_view>, 5> kVariables{{
    {SweepVariable::Alpha1, "alpha1"},
    {SweepVariable::SnrDb, "snr_db"},
    {SweepVariable::GammaTh, "gamma_th"},
    {SweepVariable::NAntennas, "n_antennas"},
    {SweepVariable::DopplerHz, "doppler_hz"},
}};

constexpr std::array<std::pair<Output, std::string_view>, 12> kOutputs{{
    {Output::Per1, "per1"},
    {Output::Per2Cond, "per2_cond"},
    {Output::Per2Bound, "per2_bound"},
    {Output::Per1Asym, "per1_asym"},
    {Output::Per2Asym, "per2_asym"},
    {Output::Cdf1, "cdf1"},
    {Output::Cdf2, "cdf2"},
    {Output::Lcr1, "lcr1"},
    {Output::Lcr2, "lcr2"},
    {Output::McPer1, "mc_per1"},
    {Output::McPer2Cond, "mc_per2_cond"},
    {Output::McPer2Uncond, "mc_per2_uncond"},
}};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Field {
  int line;
  std::string key;
  std::string value;
};

class Reader {
 public:
  explicit Reader(const std::map<std::string, Field>& fields) : fields_(fields) {}

  double real(const Field& f) const {
    double v = 0.0;
    const char* end = f.value.data() + f.value.size();
    auto [ptr, ec] = std::from_chars(f.value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      throw ConfigParseError(f.line, f.key, "expected a finite number, got '" + f.value + "'");
    }
    return v;
  }

  std::uint64_t unsigned_int(const Field& f) const {
    std::uint64_t v = 0;
    const char* end = f.value.data() + f.value.size();
    auto [ptr, ec] = std::from_chars(f.value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw ConfigParseError(f.line, f.key, "expected a non-negative integer, got '" + f.value + "'");
    }
    return v;
  }

  int integer(const Field& f) const {
    const std::uint64_t v = unsigned_int(f);
    if (v > 1'000'000) throw ConfigParseError(f.line, f.key, "integer out of range");
    return static_cast<int>(v);
  }

  std::vector<double> grid(const Field& f) const {
    const auto colon = split(f.value, ':');
    if (colon.size() == 3) {
      const double a = real({f.line, f.key, std::string(colon[0])});
      const double b = real({f.line, f.key, std::string(colon[1])});
      const int n = integer({f.line, f.key, std::string(colon[2])});
      if (n < 1) throw ConfigParseError(f.line, f.key, "grid count must be >= 1");
      std::vector<double> g(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        // Round to 15 significant digits so 0.05:0.95:19 yields 0.4, not 0.39999...
        const double v = n == 1 ? a : a + (b - a) * i / (n - 1);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.15g", v);
        g[static_cast<std::size_t>(i)] = std::strtod(buf, nullptr);
      }
      if (n > 1) g.back() = b;
      return g;
    }
    if (colon.size() != 1) throw ConfigParseError(f.line, f.key, "grid must be a list or start:stop:count");
    std::vector<double> g;
    for (auto part : split(f.value, ',')) g.push_back(real({f.line, f.key, std::string(part)}));
    return g;
  }

  const Field* find(const std::string& key) const {
    auto it = fields_.find(key);
    return it == fields_.end() ? nullptr : &it->second;
  }

 private:
  const std::map<std::string, Field>& fields_;
};

void check_grid(const std::vector<double>& grid, SweepVariable var, const std::string& key) {
  if (grid.empty()) throw ConfigParseError(0, key, "grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigParseError(0, key, "grid must be strictly increasing");
  }
  for (double v : grid) {
    bool ok = true;
    switch (var) {
      case SweepVariable::Alpha1: ok = v > 0.0 && v < 1.0; break;
      case SweepVariable::SnrDb: ok = std::isfinite(v); break;
      case SweepVariable::GammaTh: ok = v > 0.0; break;
      case SweepVariable::NAntennas: ok = v >= 1.0 && v == std::floor(v); break;
      case SweepVariable::DopplerHz: ok = v >= 0.0; break;
    }
    if (!ok) {
      throw ConfigParseError(0, key, "value " + format_number(v) + " is outside the domain of " +
                                         std::string(to_string(var)));
    }
  }
}

MobilityProfile mobility(const std::optional<double>& doppler, const std::optional<double>& speed,
                         const std::optional<double>& carrier_ghz, int user) {
  const std::string u = std::to_string(user);
  if (doppler && speed) throw ConfigError("user " + u + ": give doppler" + u + "_hz or speed" + u + "_kmh, not both");
  if (doppler) return MobilityProfile::from_doppler(*doppler);
  if (speed) {
    if (!carrier_ghz) throw ConfigError("speed" + u + "_kmh requires carrier_ghz");
    return MobilityProfile::from_speed_kmh(*speed, *carrier_ghz * 1e9);
  }
  throw ConfigError("user " + u + " mobility missing: set doppler" + u + "_hz or speed" + u +
                    "_kmh with carrier_ghz");
}

SystemConfig apply(const SystemConfig& base, SweepVariable var, double v) {
  switch (var) {
    case SweepVariable::Alpha1: return base.with_alpha1(v);
    case SweepVariable::SnrDb: return base.with_snr_linear(db_to_linear(v));
    case SweepVariable::GammaTh: return base.with_gamma_th(v);
    case SweepVariable::NAntennas: return base.with_n_antennas(static_cast<int>(v));
    case SweepVariable::DopplerHz: return base.with_doppler(v, v);
  }
  return base;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Runs fn(0..n-1) on up to `workers` threads; results keep index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t k = 0; k < w; ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      for (std::size_t i = k; i < n; i += w) out[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

struct RowResult {
  std::vector<std::string> cells;
  std::string error;
};

}  // namespace

ConfigParseError::ConfigParseError(int line, std::string key, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : "key '" + key + "': ") + what),
      line_(line),
      key_(std::move(key)) {}

std::string_view to_string(SweepVariable v) {
  for (auto [k, name] : kVariables) if (k == v) return name;
  return "?";
}

std::string_view to_string(Output o) {
  for (auto [k, name] : kOutputs) if (k == o) return name;
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view s) {
  for (auto [k, name] : kVariables) if (name == s) return k;
  throw std::invalid_argument("unknown sweep variable '" + std::string(s) + "'");
}

Output parse_output(std::string_view s) {
  for (auto [k, name] : kOutputs) if (name == s) return k;
  throw std::invalid_argument("unknown output '" + std::string(s) + "'");
}

bool is_monte_carlo(Output o) {
  return o == Output::McPer1 || o == Output::McPer2Cond || o == Output::McPer2Uncond;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SystemConfig RunConfig::system() const {
  SystemParams p;
  p.n_antennas = n_antennas;
  p.alpha1 = alpha1;
  p.snr_linear = db_to_linear(snr_db);
  p.gamma_th = gamma_th;
  p.t_packet_s = t_packet_ms * 1e-3;
  p.mobility_u1 = mobility(doppler1_hz, speed1_kmh, carrier_ghz, 1);
  p.mobility_u2 = mobility(doppler2_hz, speed2_kmh, carrier_ghz, 2);
  return SystemConfig(p);
}

SosParams RunConfig::sos() const {
  SosParams s = SosParams::defaults_for(system(), seed);
  s.num_sinusoids = num_sinusoids;
  if (sample_rate_hz) s.sample_rate_hz = *sample_rate_hz;
  return s;
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Field> fields;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigParseError(line_no, "", "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigParseError(line_no, "", "empty key");
    if (value.empty()) throw ConfigParseError(line_no, key, "empty value");
    if (fields.count(key)) throw ConfigParseError(line_no, key, "duplicate key");
    fields.emplace(key, Field{line_no, key, value});
  }

  static const std::vector<std::string> known{
      "n_antennas", "alpha1", "snr_db", "gamma_th", "t_packet_ms", "doppler1_hz", "doppler2_hz",
      "speed1_kmh", "speed2_kmh", "carrier_ghz", "seed", "num_packets", "num_sinusoids",
      "sample_rate_hz", "sweep.variable", "sweep.grid", "sweep.outputs", "sweep.series_variable",
      "sweep.series"};
  for (const auto& [key, f] : fields) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigParseError(f.line, key, "unknown key");
    }
  }

  Reader r(fields);
  RunConfig cfg;
  auto real = [&](const char* key, auto& dst) {
    if (const Field* f = r.find(key)) dst = r.real(*f);
  };
  if (const Field* f = r.find("n_antennas")) cfg.n_antennas = r.integer(*f);
  real("alpha1", cfg.alpha1);
  real("snr_db", cfg.snr_db);
  real("gamma_th", cfg.gamma_th);
  real("t_packet_ms", cfg.t_packet_ms);
  real("doppler1_hz", cfg.doppler1_hz);
  real("doppler2_hz", cfg.doppler2_hz);
  real("speed1_kmh", cfg.speed1_kmh);
  real("speed2_kmh", cfg.speed2_kmh);
  real("carrier_ghz", cfg.carrier_ghz);
  real("sample_rate_hz", cfg.sample_rate_hz);
  if (const Field* f = r.find("seed")) cfg.seed = r.unsigned_int(*f);
  if (const Field* f = r.find("num_packets")) cfg.num_packets = r.unsigned_int(*f);
  if (const Field* f = r.find("num_sinusoids")) cfg.num_sinusoids = r.integer(*f);

  const Field* var = r.find("sweep.variable");
  const Field* grid = r.find("sweep.grid");
  if (var || grid || r.find("sweep.outputs") || r.find("sweep.series_variable") || r.find("sweep.series")) {
    if (!var || !grid) throw ConfigParseError(0, "sweep", "sweep.variable and sweep.grid must both be set");
    SweepSection s;
    try {
      s.variable = parse_sweep_variable(var->value);
    } catch (const std::invalid_argument& e) {
      throw ConfigParseError(var->line, var->key, e.what());
    }
    s.grid = r.grid(*grid);
    check_grid(s.grid, s.variable, grid->key);
    if (const Field* outs = r.find("sweep.outputs")) {
      for (auto name : split(outs->value, ',')) {
        try {
          s.outputs.push_back(parse_output(name));
        } catch (const std::invalid_argument& e) {
          throw ConfigParseError(outs->line, outs->key, e.what());
        }
      }
    }
    const Field* sv = r.find("sweep.series_variable");
    const Field* ss = r.find("sweep.series");
    if (static_cast<bool>(sv) != static_cast<bool>(ss)) {
      throw ConfigParseError(0, "sweep.series", "sweep.series_variable and sweep.series go together");
    }
    if (sv) {
      try {
        s.series_variable = parse_sweep_variable(sv->value);
      } catch (const std::invalid_argument& e) {
        throw ConfigParseError(sv->line, sv->key, e.what());
      }
      if (*s.series_variable == s.variable) {
        throw ConfigParseError(sv->line, sv->key, "series variable must differ from the swept variable");
      }
      s.series = r.grid(*ss);
      check_grid(s.series, *s.series_variable, ss->key);
    }
    cfg.sweep = std::move(s);
  }

  // Semantic validation: the link config and generator settings must build.
  const SystemConfig sys = cfg.system();
  cfg.sos().validate(sys);
  if (cfg.num_packets < 1) throw ConfigError("num_packets must be >= 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError(0, "", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  os << "n_antennas = " << c.n_antennas << '\n'
     << "alpha1 = " << format_number(c.alpha1) << '\n'
     << "snr_db = " << format_number(c.snr_db) << '\n'
     << "gamma_th = " << format_number(c.gamma_th) << '\n'
     << "t_packet_ms = " << format_number(c.t_packet_ms) << '\n';
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) os << key << " = " << format_number(*v) << '\n';
  };
  opt("doppler1_hz", c.doppler1_hz);
  opt("doppler2_hz", c.doppler2_hz);
  opt("speed1_kmh", c.speed1_kmh);
  opt("speed2_kmh", c.speed2_kmh);
  opt("carrier_ghz", c.carrier_ghz);
  os << "seed = " << c.seed << '\n'
     << "num_packets = " << c.num_packets << '\n'
     << "num_sinusoids = " << c.num_sinusoids << '\n';
  opt("sample_rate_hz", c.sample_rate_hz);
  if (c.sweep) {
    const SweepSection& s = *c.sweep;
    os << "sweep.variable = " << to_string(s.variable) << '\n'
       << "sweep.grid = " << list(s.grid) << '\n';
    if (!s.outputs.empty()) {
      os << "sweep.outputs = ";
      for (std::size_t i = 0; i < s.outputs.size(); ++i) os << (i ? "," : "") << to_string(s.outputs[i]);
      os << '\n';
    }
    if (s.series_variable) {
      os << "sweep.series_variable = " << to_string(*s.series_variable) << '\n'
         << "sweep.series = " << list(s.series) << '\n';
    }
  }
  return os.str();
}

RunConfig preset(std::string_view name) {
  // The high-SNR operating point and the thresholds are not pinned down
  // numerically by the reference figures; these are documented defaults.
  RunConfig c;
  c.snr_db = 30.0;
  c.t_packet_ms = 1.0;
  c.doppler1_hz = 162.0;
  c.doppler2_hz = 162.0;
  c.alpha1 = 0.5;
  SweepSection s;
  s.variable = SweepVariable::Alpha1;
  s.grid = parse_config("doppler1_hz=0\ndoppler2_hz=0\nsweep.variable=alpha1\nsweep.grid=0.05:0.95:19")
               .sweep->grid;
  if (name == "fig1") {
    c.n_antennas = 2;
    c.gamma_th = 1.0;
    s.outputs = {Output::Per1, Output::Per2Cond};
  } else if (name == "fig2") {
    c.n_antennas = 8;
    c.gamma_th = 1.0;
    s.outputs = {Output::Per2Bound};
    s.series_variable = SweepVariable::NAntennas;
    s.series = {8.0, 128.0};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig1 or fig2)");
  }
  c.sweep = std::move(s);
  return c;
}

std::string run_sweep(const RunConfig& cfg, int batches) {
  if (!cfg.sweep) throw ConfigError("config has no sweep section");
  const SweepSection& s = *cfg.sweep;
  const SystemConfig base = cfg.system();
  const bool needs_mc = std::any_of(s.outputs.begin(), s.outputs.end(), is_monte_carlo);

  struct Point {
    double series_value;
    double value;
  };
  std::vector<Point> points;
  const std::vector<double> series = s.series_variable ? s.series : std::vector<double>{0.0};
  for (double sv : series) {
    for (double v : s.grid) points.push_back({sv, v});
  }

  const std::function<RowResult(std::size_t)> eval_row = [&](std::size_t i) {
    RowResult row;
    const Point pt = points[i];
    try {
      SystemConfig c = base;
      if (s.series_variable) c = apply(c, *s.series_variable, pt.series_value);
      c = apply(c, s.variable, pt.value);
      std::optional<PerSimulation> mc;
      if (needs_mc) {
        SosParams sos = SosParams::defaults_for(c, cfg.seed);
        sos.num_sinusoids = cfg.num_sinusoids;
        if (cfg.sample_rate_hz) sos.sample_rate_hz = *cfg.sample_rate_hz;
        mc = simulate_per(c, sos, cfg.num_packets, 1);
      }
      const double g = c.gamma_th();
      for (Output o : s.outputs) {
        switch (o) {
          case Output::Per1: row.cells.push_back(format_number(per_stage1(c).total)); break;
          case Output::Per2Cond: row.cells.push_back(format_number(per_stage2_conditional(c).total)); break;
          case Output::Per2Bound: row.cells.push_back(format_number(per_stage2_bound(c).clamped)); break;
          case Output::Per1Asym: row.cells.push_back(format_number(per_stage1_asymptotic(c))); break;
          case Output::Per2Asym: row.cells.push_back(format_number(per_stage2_asymptotic(c))); break;
          case Output::Cdf1: row.cells.push_back(format_number(cdf_gamma1(c, g))); break;
          case Output::Cdf2: row.cells.push_back(format_number(cdf_gamma2(c, g))); break;
          case Output::Lcr1: row.cells.push_back(format_number(lcr_gamma1(c, g))); break;
          case Output::Lcr2: row.cells.push_back(format_number(lcr_gamma2(c, g))); break;
          case Output::McPer1:
            row.cells.push_back(format_number(mc->stage1.mean));
            row.cells.push_back(format_number(mc->stage1.std_error));
            break;
          case Output::McPer2Cond:
            row.cells.push_back(format_number(mc->stage2_conditional.mean));
            row.cells.push_back(format_number(mc->stage2_conditional.std_error));
            break;
          case Output::McPer2Uncond:
            row.cells.push_back(format_number(mc->stage2_unconditional.mean));
            row.cells.push_back(format_number(mc->stage2_unconditional.std_error));
            break;
        }
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.cells.clear();
      for (Output o : s.outputs) {
        row.cells.push_back("nan");
        if (is_monte_carlo(o)) row.cells.push_back("nan");
      }
    }
    return row;
  };

  const std::vector<RowResult> rows = parallel_map(points.size(), batches, eval_row);
  const bool any_error = std::any_of(rows.begin(), rows.end(), [](const RowResult& r) { return !r.error.empty(); });

  std::ostringstream os;
  std::vector<std::string> header;
  if (s.series_variable) header.emplace_back(to_string(*s.series_variable));
  header.emplace_back(to_string(s.variable));
  for (Output o : s.outputs) {
    header.emplace_back(to_string(o));
    if (is_monte_carlo(o)) header.push_back(std::string(to_string(o)) + "_se");
  }
  if (any_error) header.emplace_back("error");
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> cells;
    if (s.series_variable) cells.push_back(format_number(points[i].series_value));
    cells.push_back(format_number(points[i].value));
    cells.insert(cells.end(), rows[i].cells.begin(), rows[i].cells.end());
    if (any_error) cells.push_back(csv_safe(rows[i].error));
    for (std::size_t j = 0; j < cells.size(); ++j) os << (j ? "," : "") << cells[j];
    os << '\n';
  }
  return os.str();
}

int ValidationReport::exit_code() const {
  bool fail = false;
  bool low = low_confidence;
  for (const auto& r : rows) {
    fail |= r.status == CheckStatus::Fail;
    low |= r.status == CheckStatus::LowConfidence;
  }
  return fail ? 1 : (low ? 2 : 0);
}

std::string ValidationReport::render() const {
  std::ostringstream os;
  os << "packets: " << num_packets << (low_confidence ? "  [low confidence: few conditioning packets]" : "")
     << '\n';
  os << std::left << std::setw(12) << "quantity" << std::setw(25) << "analytic" << std::setw(25)
     << "monte_carlo" << std::setw(25) << "std_error" << std::setw(26) << "tolerance" << "status\n";
  for (const auto& r : rows) {
    const char* st = r.status == CheckStatus::Pass ? "PASS" : r.status == CheckStatus::Fail ? "FAIL" : "LOW-CONFIDENCE";
    os << std::left << std::setw(12) << r.quantity << std::setw(25) << format_number(r.analytic)
       << std::setw(25) << format_number(r.estimate) << std::setw(25) << format_number(r.std_error)
       << std::setw(26) << r.tolerance << st << '\n';
  }
  const int code = exit_code();
  os << "overall: " << (code == 0 ? "PASS" : code == 1 ? "FAIL" : "WARN (low confidence)") << '\n';
  return os.str();
}

ValidationReport run_validation(const SystemConfig& cfg, const SosParams& sos,
                                std::uint64_t num_packets, int batches) {
  const PerSimulation mc = simulate_per(cfg, sos, num_packets, batches);
  const double g = cfg.gamma_th();
  ValidationReport rep;
  rep.num_packets = num_packets;
  rep.low_confidence = mc.low_confidence;

  auto bernoulli = [&](const char* name, double analytic, const McEstimate& est) {
    ValidationRow row{name, analytic, est.mean, est.std_error, "|diff| <= 3 se", CheckStatus::Pass};
    if (est.num_trials < kMinConditioning) {
      row.status = CheckStatus::LowConfidence;
    } else {
      const double n = static_cast<double>(est.num_trials);
      const double se = std::max(est.std_error, std::sqrt(analytic * (1.0 - analytic) / n));
      row.status = std::abs(analytic - est.mean) <= 3.0 * se ? CheckStatus::Pass : CheckStatus::Fail;
    }
    rep.rows.push_back(row);
  };
  auto rate = [&](const char* name, double analytic, const McEstimate& est) {
    ValidationRow row{name, analytic, est.mean, est.std_error, "|diff| <= 5% of analytic", CheckStatus::Pass};
    const double span = mc.packet_window_s * static_cast<double>(mc.counts.packets);
    const double expected = analytic * span;
    const double observed = est.mean * span;
    if (analytic == 0.0) {
      row.status = est.mean == 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
    } else if (std::max(expected, observed) < 100.0) {
      row.status = CheckStatus::LowConfidence;
    } else {
      row.status = std::abs(est.mean - analytic) <= 0.05 * analytic ? CheckStatus::Pass : CheckStatus::Fail;
    }
    rep.rows.push_back(row);
  };

  bernoulli("cdf1", cdf_gamma1(cfg, g), mc.outage1);
  bernoulli("cdf2", cdf_gamma2(cfg, g), mc.outage2);
  rate("lcr1", lcr_gamma1(cfg, g), mc.lcr1);
  rate("lcr2", lcr_gamma2(cfg, g), mc.lcr2);
  bernoulli("per1", per_stage1(cfg).total, mc.stage1);
  bernoulli("per2_cond", per_stage2_conditional(cfg).total, mc.stage2_conditional);

  const UnionBound bound = per_stage2_bound(cfg);
  const McEstimate& u = mc.stage2_unconditional;
  ValidationRow row{"per2_bound", bound.raw, u.mean, u.std_error, "bound >= mc - 3 se", CheckStatus::Pass};
  if (u.num_trials < kMinConditioning) {
    row.status = CheckStatus::LowConfidence;
  } else {
    const double se = std::max(u.std_error, std::sqrt(u.mean * (1.0 - u.mean) / static_cast<double>(u.num_trials)));
    row.status = bound.raw >= u.mean - 3.0 * se ? CheckStatus::Pass : CheckStatus::Fail;
  }
  rep.rows.push_back(row);
  return rep;
}

}  // namespace noma
