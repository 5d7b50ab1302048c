// SPDX-License-Identifier: Apache-2.0
//
// Switched-capacitor presynaptic channel: three sampled-analog state voltages
// (v_u facilitation, v_r depression, v_psc output trace) decayed by periodic
// charge-sharing events on a free-running clock grid, updated by counted
// charge-share pulses on each input spike, and drained continuously by a
// temperature-dependent junction leak.

#pragma once

#include <cstdint>
#include <limits>

namespace scnm {

// Clock index sentinel for "no event scheduled".
inline constexpr int64_t kNever = std::numeric_limits<int64_t>::max();

// ---------------------------------------------------------------------------
// Leakage

// Parasitic junction resistance draining every sampled node. The resistance
// halves for every +10 C; leak acts in wall-clock time (it is physics, not
// clocked logic), so accelerated-time runs see proportionally less of it.
struct LeakModel {
  bool enabled = true;
  double r_ref_ohm = 50e12;   // resistance at temp_ref_c
  double temp_ref_c = 30.0;
  double doubling_c = 10.0;   // degrees per halving of resistance

  double resistance_ohm(double temperature_c) const;
  // RC time constant for a node of capacitance c_farad at temperature_c.
  double tau_s(double temperature_c, double c_farad) const;
  // exp(-dt/RC) decay factor; 1.0 when disabled.
  double factor(double dt_wall_s, double temperature_c, double c_farad) const;
};

// ---------------------------------------------------------------------------
// Channel configuration

enum class PscTransfer {
  // Sample the PSC between the facilitation update and the depression
  // update: the emitted amplitude equals A*(u - r) of the ideal model.
  kBeforeDeprUpdate,
  // Sample after both updates (the physical pulse ordering): amplitudes are
  // scaled by (1 - alpha_achieved) relative to the ideal model.
  kAfterDeprUpdate,
};

struct ScPresynConfig {
  double c_state_f = 75e-15;  // state capacitor
  double c_ratio_f = 5e-15;   // charge-sharing capacitor
  // Decay event spacing in clock ticks; 0 disables the decay chain.
  int64_t decay_period_u = 0;
  int64_t decay_period_r = 0;
  int64_t decay_period_psc = 0;
  // Charge-share pulses applied per spike (quantized U and alpha).
  int update_events_u = 5;
  int update_events_r = 11;
  double v_a = 1.0;           // update target rail for v_u, scale for v_r
  PscTransfer transfer = PscTransfer::kAfterDeprUpdate;
  LeakModel leak;
  double clock_hz = 3.3e6;
  double speedup = 1.0;       // accelerated-time factor (scales wall time)
  double temperature_c = 25.0;

  // Per-event retained fraction c_state/(c_state + c_ratio).
  double decay_ratio() const { return c_state_f / (c_state_f + c_ratio_f); }
  double wall_dt_s(int64_t dt_clk) const {
    return static_cast<double>(dt_clk) / (clock_hz * speedup);
  }
};

void validate(const ScPresynConfig& cfg);

// Clock ticks between decay events so that the event chain realizes an
// exponential with time constant tau_s: period = -tau * clock / ln(ratio),
// rounded to the nearest tick (minimum 1). Returns 0 for tau <= 0 (disabled).
int64_t period_for_tau(double tau_s, double clock_hz, double ratio);

// Charge-share pulse count whose residual step ratio best matches the
// requested fraction: k = round(ln(1 - frac) / ln(ratio)), clamped to
// [1, max_events]. frac == 1 maps to max_events.
int quantize_step_count(double frac, double ratio, int max_events);

// Fraction actually realized by k pulses: 1 - ratio^k.
double achieved_fraction(int k, double ratio);

// ---------------------------------------------------------------------------
// Channel state

struct ScPresynState {
  double v_u = 0.0;
  double v_r = 0.0;
  double v_psc = 0.0;
  int64_t now_clk = 0;
  // Absolute clock index of the next decay event per node (kNever if none).
  int64_t next_decay_u = kNever;
  int64_t next_decay_r = kNever;
  int64_t next_decay_psc = kNever;
};

// State at clock start_clk with all voltages at zero and decay events
// scheduled on the free-running grid (next multiple of the period strictly
// after start_clk).
ScPresynState presyn_init(const ScPresynConfig& cfg, int64_t start_clk);

// Advances to now_clk: fires every decay event due in (state.now_clk,
// now_clk] in time order and applies leak over the wall-clock gaps.
void presyn_tick(ScPresynState& s, const ScPresynConfig& cfg, int64_t now_clk);

// Advances to spike_clk, then applies one input spike: update_events_u
// charge-share pulses driving v_u toward v_a, a PSC transfer (v_psc is
// REPLACED by the sampled difference v_u - v_r at the configured point),
// and update_events_r pulses driving v_r toward the updated v_u.
// Returns the transferred amplitude.
double presyn_on_spike(ScPresynState& s, const ScPresynConfig& cfg,
                       int64_t spike_clk);

// ---------------------------------------------------------------------------
// Parameter quantization

struct QuantizedStp {
  int update_events_u = 0;
  int update_events_r = 0;
  int64_t decay_period_u = 0;
  int64_t decay_period_r = 0;
  int64_t decay_period_psc = 0;
  double achieved_utilization = 0.0;
  double achieved_alpha = 0.0;
  double achieved_tau_facil_s = 0.0;
  double achieved_tau_depr_s = 0.0;
  double achieved_tau_psc_s = 0.0;
};

struct StpParams;  // model_core.hpp

// Maps ideal model parameters onto pulse counts and decay periods for the
// given clock and capacitor ratio. Periods of disabled decays (tau <= 0) are
// 0; achieved taus are the exact values realized by the integer periods.
QuantizedStp quantize_stp_params(const StpParams& req,
                                 const ScPresynConfig& templ, int max_events);

}  // namespace scnm
