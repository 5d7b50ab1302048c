// SPDX-License-Identifier: Apache-2.0
//
// scnm — behavioral simulator for a switched-capacitor neuromorphic array.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scnm/harness.hpp"
#include "scnm/io.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const scnm::ExperimentConfig cfg = scnm::load_experiment_config(config_path);
  scnm::run_experiment(cfg, out_dir);
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

int cmd_figure(const std::string& name, const std::string& out_dir) {
  scnm::run_figure(name, out_dir);
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

int cmd_fit_tau(const scnm::TauProtocol& protocol) {
  const scnm::TauEnsembleResult res =
      scnm::extract_time_constant_ensemble(protocol);
  std::printf("setting_ms %.3f temperature_c %.1f leak %s\n",
              protocol.tau_setting_s * 1e3, protocol.temperature_c,
              protocol.leak_enabled ? "on" : "off");
  for (const scnm::TauCircuitResult& c : res.circuits) {
    if (c.valid)
      std::printf("circuit %3d tau_ms %.3f\n", c.row, c.tau_s * 1e3);
    else
      std::printf("circuit %3d fit skipped\n", c.row);
  }
  std::printf("ensemble tau_ms %.3f +/- %.3f\n", res.tau_mean_s * 1e3,
              res.tau_std_s * 1e3);
  return 0;
}

int cmd_sweep(const std::vector<double>& taus_ms,
              const std::vector<double>& temps, const std::string& out_path) {
  std::vector<double> settings;
  for (double t : taus_ms) settings.push_back(t * 1e-3);
  const std::vector<scnm::TauSweepPoint> points =
      scnm::sweep_temperature(temps, settings, scnm::TauProtocol{});
  FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + out_path);
  std::fprintf(f, "temperature_c,tau_setting,tau_mean,tau_std\n");
  for (const scnm::TauSweepPoint& p : points)
    std::fprintf(f, "%.9f,%.9f,%.9f,%.9f\n", p.temperature_c, p.tau_setting_s,
                 p.tau_mean_s, p.tau_std_s);
  std::fclose(f);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switched-capacitor neuromorphic array simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config_path, "JSON experiment config")
      ->required();
  run->add_option("--out", out_dir, "Output directory");

  std::string figure_name;
  std::string fig_out = "out";
  CLI::App* figure =
      app.add_subcommand("figure", "Generate a canned demonstration figure");
  figure
      ->add_option("name", figure_name,
                   "One of: stp-facilitating, stp-depressing, recovery, "
                   "tau-sweep, forced-transition, stop-learning")
      ->required();
  figure->add_option("--out", fig_out, "Output directory");

  scnm::TauProtocol protocol;
  double tau_ms = 300.0;
  bool leak_off = false, mismatch_off = false;
  CLI::App* fit = app.add_subcommand(
      "fit-tau", "Extract the effective depression time constant");
  fit->add_option("--tau-ms", tau_ms, "Programmed time constant (ms)");
  fit->add_option("--temp", protocol.temperature_c, "Temperature (deg C)");
  fit->add_flag("--leak-off", leak_off, "Disable leakage");
  fit->add_flag("--mismatch-off", mismatch_off, "Disable device mismatch");
  fit->add_option("--probe-hz", protocol.probe_hz, "Probe rate (Hz)");
  fit->add_option("--reps", protocol.repetitions, "Repetitions per circuit");
  fit->add_option("--circuits", protocol.circuits, "Parallel circuits");
  fit->add_option("--seed", protocol.seed, "Mismatch seed");

  std::vector<double> sweep_taus_ms = {300.0, 600.0};
  std::vector<double> sweep_temps = {10.0, 20.0, 30.0, 40.0, 50.0};
  std::string sweep_out = "tau_sweep.csv";
  CLI::App* sweep = app.add_subcommand(
      "sweep-temp", "Time-constant extraction over a temperature grid");
  sweep->add_option("--taus", sweep_taus_ms, "Settings (ms)");
  sweep->add_option("--temps", sweep_temps, "Temperatures (deg C)");
  sweep->add_option("--out", sweep_out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (figure->parsed()) return cmd_figure(figure_name, fig_out);
    if (fit->parsed()) {
      protocol.tau_setting_s = tau_ms * 1e-3;
      protocol.leak_enabled = !leak_off;
      if (mismatch_off) protocol.mismatch_sigma = 0.0;
      return cmd_fit_tau(protocol);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_taus_ms, sweep_temps, sweep_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
