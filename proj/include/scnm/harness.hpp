// SPDX-License-Identifier: Apache-2.0
//
// Characterization harness: exponential fitting, the spike-count time-constant
// extraction protocol, canned demonstration figures, and temperature sweeps.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scnm/model_core.hpp"
#include "scnm/system.hpp"

namespace scnm {

// ---------------------------------------------------------------------------
// Exponential fit

struct Sample {
  double t_s = 0.0;
  double value = 0.0;
};

struct FitResult {
  double tau_s = 0.0;
  double amplitude = 0.0;  // fitted value at the first sample's time
};

// Least-squares fit of amp * exp(-t/tau) (no offset term). Requires at least
// four samples with strictly positive values and an overall decaying trend;
// throws std::invalid_argument otherwise. Deterministic.
FitResult fit_exponential(const std::vector<Sample>& samples);

// ---------------------------------------------------------------------------
// Time-constant extraction from output spike counts
//
// Per repetition: baseline probe pulses measure the unloaded response count,
// a charging burst loads the depression node, then probe pulses track its
// recovery. Depression pulses are disabled during all probing so probes do
// not disturb the node; facilitation pulses stay at maximum so every probe
// re-tops the facilitation node and the probe response depends only on the
// depression state. The count deficit relative to baseline decays with the
// node's effective time constant.

struct TauProtocol {
  double tau_setting_s = 0.3;   // programmed depression time constant
  double temperature_c = 25.0;
  bool leak_enabled = true;
  double mismatch_sigma = 0.01;
  int circuits = 16;            // rows measured in parallel, diagonal wiring
  int repetitions = 16;
  double probe_hz = 5.0;
  double charge_hz = 12.5;
  int charge_spikes = 2;
  int baseline_probes = 3;
  int relax_probes = 8;
  uint64_t seed = 1;
  double alpha = 0.5;           // depression strength during charging
};

struct TauCircuitResult {
  int row = 0;
  std::vector<Sample> deficits;  // repetition-averaged count deficits
  double tau_s = 0.0;            // single fit over the averaged deficits
  bool valid = false;
};

struct TauEnsembleResult {
  TauProtocol protocol;
  std::vector<TauCircuitResult> circuits;
  double tau_mean_s = 0.0;  // mean over valid circuit fits
  double tau_std_s = 0.0;   // sample std over valid circuit fits
};

TauEnsembleResult extract_time_constant_ensemble(const TauProtocol& protocol);

// ---------------------------------------------------------------------------
// Figures

// Presynaptic dynamics presets for the demonstration figures.
//  - "facilitating": low utilization, strong slow recovery (300 ms / 300 ms)
//  - "depressing": high utilization, fast facilitation decay (10 / 490 ms)
StpParams figure_stp_params(const std::string& kind);

struct StpFigureData {
  std::vector<double> spike_times_s;
  std::vector<double> chip_amplitudes;
  std::vector<double> model_amplitudes;   // ideal model, nominal parameters
  double fitted_scale = 1.0;              // least-squares chip/model scale
  std::vector<double> trace_times_s;
  std::vector<double> chip_trace;         // sampled output node
  std::vector<double> model_trace;        // ideal additive trace, scaled
};

// 10 input pulses at 50 Hz through one row; leak disabled, no mismatch.
StpFigureData run_stp_figure(const std::string& kind);

struct RecoveryFigureData {
  double tau_setting_s = 0.0;             // 0 = decay chain disabled
  std::vector<double> probe_times_s;      // relative to charging end
  std::vector<double> probe_gain;         // probe amplitude / baseline
  std::optional<double> fitted_tau_s;
};

// Single-circuit probe-gain recovery time courses at temperature_c for
// depression settings {300 ms, 600 ms, disabled}.
std::vector<RecoveryFigureData> run_recovery_figure(double temperature_c);

struct TauSweepPoint {
  double temperature_c = 0.0;
  double tau_setting_s = 0.0;
  double tau_mean_s = 0.0;
  double tau_std_s = 0.0;
};

// Ensemble time-constant extraction over a temperature / setting grid.
std::vector<TauSweepPoint> sweep_temperature(
    const std::vector<double>& temps_c, const std::vector<double>& settings_s,
    const TauProtocol& base);

struct CellTraceData {
  std::vector<double> t_s;        // cycle end times
  std::vector<double> x;          // stored synaptic variable, cell (0, 0)
  std::vector<double> calcium;    // column 0 controller value
  std::vector<uint8_t> up_enabled;
  std::vector<double> pulse_times_s;  // input pulse times
};

// Forced potentiation then forced depression of one cell (gating bypassed).
CellTraceData run_forced_transition_figure();

// Calcium stop-learning: a fast burst is cut off by the calcium gate before
// the cell can cross threshold; a faster burst gets enough pulses through
// to cross and latch.
CellTraceData run_stop_learning_figure();

// Writes the named figure's data as CSV files into out_dir. Names:
// stp-facilitating, stp-depressing, recovery, tau-sweep, forced-transition,
// stop-learning. Throws std::invalid_argument for unknown names.
void run_figure(const std::string& name, const std::string& out_dir);

}  // namespace scnm
