// noma-cli: command-line front end for the two-user NOMA reliability model.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "noma/analytic.hpp"
#include "noma/channel.hpp"
#include "noma/optimize.hpp"
#include "noma/runner.hpp"

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> packets;
  std::string out_path;
  int batches = 1;
  bool dump = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Config file (key = value)");
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--packets", c.packets, "Monte-Carlo packet count")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--batches", c.batches, "Concurrency width")->check(CLI::PositiveNumber);
  cmd->add_flag("--dump-config", c.dump, "Print the effective config and exit");
}

noma::RunConfig resolve(const Common& c) {
  noma::RunConfig cfg = c.config_path.empty() ? noma::RunConfig{} : noma::load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.packets) cfg.num_packets = *c.packets;
  return cfg;
}

void emit(const Common& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path);
  if (!out) throw std::runtime_error("cannot write '" + c.out_path + "'");
  out << text;
}

std::string line(const char* key, double v) { return std::string(key) + " = " + noma::format_number(v) + "\n"; }

std::string analytic_report(const noma::SystemConfig& s) {
  const double g = s.gamma_th();
  const auto p1 = noma::per_stage1(s);
  const auto p2 = noma::per_stage2_conditional(s);
  const auto b = noma::per_stage2_bound(s);
  std::string r;
  r += line("cdf1", noma::cdf_gamma1(s, g));
  r += line("cdf2", noma::cdf_gamma2(s, g));
  r += line("lcr1", noma::lcr_gamma1(s, g));
  r += line("lcr2", noma::lcr_gamma2(s, g));
  r += line("per1", p1.total);
  r += line("per2_cond", p2.total);
  r += line("per2_bound", b.clamped);
  r += line("per2_bound_raw", b.raw);
  r += line("per1_asym", noma::per_stage1_asymptotic(s));
  r += line("per2_asym", noma::per_stage2_asymptotic(s));
  if (p1.degenerate || p2.degenerate) r += "degenerate = 1\n";
  return r;
}

std::string estimate(const char* key, const noma::McEstimate& e) {
  return line(key, e.mean) + std::string(key) + "_se = " + noma::format_number(e.std_error) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliability analysis and simulation of two-user uplink NOMA with SIC"};
  app.require_subcommand(1);

  Common analytic_opts, sweep_opts, sim_opts, val_opts, opt_opts;

  auto* analytic = app.add_subcommand("analytic", "Evaluate every closed form at one point");
  add_common(analytic, analytic_opts);

  auto* sweep = app.add_subcommand("sweep", "Run the sweep section of a config, CSV output");
  add_common(sweep, sweep_opts);
  std::string sweep_preset;
  sweep->add_option("--preset", sweep_preset, "Use a built-in preset instead of --config");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo packet simulation");
  add_common(simulate, sim_opts);
  std::string trajectory_path;
  double trajectory_s = 0.0;
  simulate->add_option("--trajectory", trajectory_path, "Also dump one channel trajectory as CSV");
  simulate->add_option("--duration", trajectory_s, "Trajectory length in seconds (default: one packet)");

  auto* validate = app.add_subcommand("validate", "Closed forms vs Monte Carlo report");
  add_common(validate, val_opts);

  auto* optimize = app.add_subcommand("optimize", "Optimal alpha1 under a stage-1 PER cap");
  add_common(optimize, opt_opts);
  double epsilon = 1e-2;
  optimize->add_option("--epsilon", epsilon, "Stage-1 PER cap");

  auto* preset_cmd = app.add_subcommand("preset", "Print a built-in config");
  std::string preset_name;
  std::string preset_out;
  preset_cmd->add_option("name", preset_name, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  preset_cmd->add_option("--out", preset_out, "Write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preset_cmd) {
      Common c;
      c.out_path = preset_out;
      emit(c, noma::dump_config(noma::preset(preset_name)));
      return 0;
    }

    if (*analytic) {
      const auto cfg = resolve(analytic_opts);
      if (analytic_opts.dump) return emit(analytic_opts, noma::dump_config(cfg)), 0;
      emit(analytic_opts, analytic_report(cfg.system()));
      return 0;
    }

    if (*sweep) {
      if (!sweep_preset.empty() && !sweep_opts.config_path.empty()) {
        throw std::invalid_argument("--preset and --config are mutually exclusive");
      }
      noma::RunConfig cfg = sweep_preset.empty() ? resolve(sweep_opts) : noma::preset(sweep_preset);
      if (!sweep_preset.empty()) {
        if (sweep_opts.seed) cfg.seed = *sweep_opts.seed;
        if (sweep_opts.packets) cfg.num_packets = *sweep_opts.packets;
      }
      if (sweep_opts.dump) return emit(sweep_opts, noma::dump_config(cfg)), 0;
      emit(sweep_opts, noma::run_sweep(cfg, sweep_opts.batches));
      return 0;
    }

    if (*simulate) {
      const auto cfg = resolve(sim_opts);
      if (sim_opts.dump) return emit(sim_opts, noma::dump_config(cfg)), 0;
      const auto sys = cfg.system();
      const auto sos = cfg.sos();
      sos.validate(sys);
      const auto mc = noma::simulate_per(sys, sos, cfg.num_packets, sim_opts.batches);
      std::string r = "packets = " + std::to_string(mc.counts.packets) + "\n";
      r += estimate("mc_per1", mc.stage1);
      r += estimate("mc_per2_cond", mc.stage2_conditional);
      r += estimate("mc_per2_uncond", mc.stage2_unconditional);
      r += estimate("mc_cdf1", mc.outage1);
      r += estimate("mc_cdf2", mc.outage2);
      r += estimate("mc_lcr1", mc.lcr1);
      r += estimate("mc_lcr2", mc.lcr2);
      if (mc.low_confidence) r += "low_confidence = 1\n";
      emit(sim_opts, r);
      if (!trajectory_path.empty()) {
        const double d = trajectory_s > 0.0 ? trajectory_s : sys.t_packet_s();
        std::ofstream out(trajectory_path);
        if (!out) throw std::runtime_error("cannot write '" + trajectory_path + "'");
        noma::write_trajectory_csv(out, noma::generate_trajectory(sys, sos, d), sos.seed);
      }
      return 0;
    }

    if (*validate) {
      const auto cfg = resolve(val_opts);
      if (val_opts.dump) return emit(val_opts, noma::dump_config(cfg)), 0;
      const auto sys = cfg.system();
      const auto sos = cfg.sos();
      sos.validate(sys);
      const auto report = noma::run_validation(sys, sos, cfg.num_packets, val_opts.batches);
      emit(val_opts, report.render());
      return report.exit_code();
    }

    if (*optimize) {
      const auto cfg = resolve(opt_opts);
      if (opt_opts.dump) return emit(opt_opts, noma::dump_config(cfg)), 0;
      noma::OptProblem p{cfg.system()};
      p.epsilon = epsilon;
      const auto res = noma::solve_p1(p);
      std::string r = line("alpha1", res.alpha_star) + line("objective", res.objective) +
                      line("per1", res.constraint_value) + "feasible = " + (res.feasible ? "1" : "0") +
                      "\nevaluations = " + std::to_string(res.evaluations) + "\n";
      emit(opt_opts, r);
      return res.feasible ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
