// SPDX-License-Identifier: Apache-2.0
//
// Whole-chip behavioral simulator: a 128-row x 64-column synapse matrix with
// per-row presynaptic channels, per-column integrate-and-fire neurons with
// calcium-based stop-learning controllers, shared weight RAM, DAC-programmed
// bias rails, and seeded capacitor-mismatch between nominally identical
// circuits. Time advances in matrix cycles of 2046 clock ticks; input spikes
// latch into a per-row register and take effect at the start of the cycle
// after the one in which they arrive.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scnm/model_core.hpp"
#include "scnm/neuron.hpp"
#include "scnm/sc_presyn.hpp"
#include "scnm/sc_synapse.hpp"

namespace scnm {

// ---------------------------------------------------------------------------
// Programmable bias voltages, all constrained to [0, 1].

struct DacSettings {
  double presyn_va = 1.0;    // presynaptic update rail / amplitude scale
  double syn_va = 0.95;      // hebbian up rail
  double syn_vb = 0.95;      // hebbian down rail
  double syn_valpha = 0.255; // refresh up rail
  double syn_vbeta = 0.255;  // refresh down rail
  double vcm = 0.25;         // common mode for the synapse pulse rails
  double psc_scale = 1.0;    // output conductance scale
  double theta_v = 0.25;     // membrane comparator threshold
};

void validate(const DacSettings& d);

// Name-keyed access for config files; names match the field identifiers.
// Throws std::invalid_argument for unknown names.
void set_dac_value(DacSettings& d, const std::string& name, double value);
std::vector<std::string> dac_names();

// ---------------------------------------------------------------------------
// Per-column calcium controller configuration.

struct CalciumConfig {
  double tau_s = 0.1;       // low-pass time constant
  double quantum = 1.0;     // increment per postsynaptic spike
  // Gating windows, strict inequalities on both sides. Defaults leave both
  // branches always enabled.
  double up_low = -1.0;
  double up_high = 1e30;
  double down_low = -1.0;
  double down_high = 1e30;
};

void validate(const CalciumConfig& c);

// ---------------------------------------------------------------------------
// Chip configuration

struct ChipConfig {
  double clock_hz = 3.3e6;
  double speedup = 1.0;        // clock acceleration; biology per cycle fixed
  double temperature_c = 25.0;
  uint64_t seed = 1;
  double mismatch_sigma = 0.01;  // relative capacitor spread; 0 disables
  LeakModel leak;
  DacSettings dac;
  StpParams stp;               // requested presynaptic dynamics (all rows)
  int max_update_events = 120; // pulse-count ceiling for quantization
  NeuronParams neuron;         // theta_v is overridden by dac.theta_v
  CalciumConfig calcium;
  RowDriver driver;            // rails are overridden by dac values
  double theta_x = 0.5;        // bistability threshold of the cells
};

void validate(const ChipConfig& c);

struct InputSpike {
  double t_s = 0.0;  // wall-clock seconds
  int row = 0;
};

struct OutputSpike {
  int64_t cycle = 0;
  int neuron = 0;
};

struct AmplitudeEvent {
  int64_t cycle = 0;
  int row = 0;
  double amplitude = 0.0;
};

// ---------------------------------------------------------------------------

class ChipSim {
 public:
  static constexpr int kRows = 128;
  static constexpr int kCols = 64;
  static constexpr int kClocksPerCycle = 2046;

  explicit ChipSim(const ChipConfig& cfg);

  const ChipConfig& config() const { return cfg_; }
  // Biological duration of one matrix cycle (independent of speedup).
  double cycle_bio_s() const { return kClocksPerCycle / cfg_.clock_hz; }
  // Wall-clock duration of one matrix cycle.
  double cycle_wall_s() const { return cycle_bio_s() / cfg_.speedup; }
  int64_t cycle() const { return cycle_; }
  double now_bio_s() const { return static_cast<double>(cycle_) * cycle_bio_s(); }

  // Queues an input spike at wall-clock time t_s; it is processed at the
  // start of cycle floor(t_s / cycle_wall_s()) + 1. Throws
  // std::invalid_argument if that cycle has already run or row is out of
  // range. Simultaneous spikes on one row collapse into one pulse.
  void submit_spike(double t_s, int row);
  void submit_spikes(const std::vector<InputSpike>& spikes);

  void run_cycle();
  void run_cycles(int64_t n);
  // Runs until cycle() == target (no-op if already reached).
  void run_until_cycle(int64_t target);

  // Output spikes since the last drain, in firing order.
  std::vector<OutputSpike> drain_output_spikes();
  // Presynaptic transfer amplitudes for every processed input pulse.
  const std::vector<AmplitudeEvent>& amplitude_log() const { return amp_log_; }
  void clear_amplitude_log() { amp_log_.clear(); }

  void set_weights(const WeightRam& ram);
  WeightRam weights() const;

  // Hebbian branch override applied to every cell (kNone restores normal
  // membrane-directed behaviour).
  void set_force_mode(ForceMode m) { force_ = m; }
  // Replaces the calcium controller's gate decisions for all columns.
  void set_learn_override(bool up_enabled, bool down_enabled);
  void clear_learn_override();
  // Reprograms the per-spike pulse counts on all rows (facilitation,
  // depression). Takes effect from the next processed spike.
  void set_presyn_update_counts(int events_u, int events_r);

  void set_cell_x(int row, int col, double x);
  double cell_x(int row, int col) const;

  // Reprograms the bias DACs; derived per-row circuits are rebuilt.
  void set_dac(const DacSettings& d);

  // Pulse counts and decay periods actually programmed, with the dynamics
  // they realize given this row's (mismatched) capacitor ratio.
  QuantizedStp achieved_stp(int row) const;

  const ScPresynState& presyn_state(int row) const;
  const ScPresynConfig& presyn_config(int row) const;
  const NeuronState& neuron_state(int col) const;
  double calcium(int col) const;
  bool up_enabled(int col) const;
  bool down_enabled(int col) const;

 private:
  void rebuild_biases();
  void refresh_cell_cache(int idx);
  static int cell_index(int row, int col) { return col * kRows + row; }

  ChipConfig cfg_;
  double cycle_bio_s_ = 0.0;

  std::array<ScPresynConfig, kRows> presyn_cfg_{};
  std::array<ScPresynState, kRows> presyn_{};
  int quant_events_u_ = 0;
  int quant_events_r_ = 0;
  int64_t period_u_ = 0, period_r_ = 0, period_psc_ = 0;

  std::array<RowDriver, kRows> driver_{};
  // Raw mismatch draws, kept so DAC changes can rebuild derived values.
  std::array<double, kRows> mm_c_state_{}, mm_c_ratio_{}, mm_leak_{},
      mm_c_refr_{}, mm_c_hebb_{};

  // Column-major cell arrays (index = col * kRows + row).
  std::vector<SynapseCell> cells_;
  std::vector<double> cell_leak_factor_;
  std::vector<double> cell_mm_;        // per-cell capacitance factor
  // Dormancy: 0 = active, 1 = parked at x == 0, 2 = parked at x == 1.
  std::vector<uint8_t> cell_parked_;
  std::vector<uint8_t> cell_stable0_, cell_stable1_;
  std::vector<uint8_t> rail_comp0_, rail_comp1_;

  std::vector<WeightEntry> w_;  // column-major mirror of the weight RAM

  std::array<NeuronState, kCols> neurons_{};
  std::array<double, kCols> calcium_{};
  std::array<uint8_t, kCols> up_en_{}, down_en_{};
  std::array<uint8_t, kCols> spiked_prev_{};
  double ca_decay_ = 1.0;

  // Pending inputs as (processing cycle, row), kept as a min-heap.
  std::vector<std::pair<int64_t, int>> pending_;

  std::vector<OutputSpike> out_;
  std::vector<AmplitudeEvent> amp_log_;
  int64_t cycle_ = 0;
  ForceMode force_ = ForceMode::kNone;
  bool learn_override_ = false;
  bool override_up_ = false, override_down_ = false;
};

}  // namespace scnm
