// SPDX-License-Identifier: Apache-2.0
//
// Ideal (non-quantized) synapse models used as reference dynamics:
//  - iterative short-term plasticity with facilitation u and depression r,
//  - bistable stop-learning synapse x with calcium-gated jumps and drift.
// All functions are pure: they take state by value/const-ref and return the
// successor state. Time enters only through explicit dt arguments.

#pragma once

#include <cstdint>
#include <vector>

namespace scnm {

// ---------------------------------------------------------------------------
// Short-term plasticity

struct StpParams {
  double utilization = 0.29;  // U: fraction recruited per spike, in [0, 1]
  double alpha = 0.5;         // depression coupling per spike, in [0, 1]
  double tau_facil_s = 0.3;   // decay of u toward its baseline U
  double tau_depr_s = 0.3;    // decay of r toward 0
  double tau_psc_s = 0.01;    // decay of the emitted PSC trace
  double amplitude = 1.0;     // A: output scale
};

// Throws std::invalid_argument on NaN or out-of-range values.
void validate(const StpParams& p);

struct StpState {
  double u = 0.0;            // in [U, 1] once initialized from rest
  double r = 0.0;            // in [0, 1]
  double last_spike_s = 0.0; // bookkeeping for trace evaluation
};

// Rest state: u at its baseline U, r fully recovered.
StpState stp_rest_state(const StpParams& p);

struct StpSpikeResult {
  StpState state;
  double psc_amplitude = 0.0;
};

// Advances (u, r) over the inter-spike interval and applies one spike.
// The emitted amplitude A*(u - r) uses the decayed values in effect when the
// spike arrives; the jumps (u toward 1 with step U, r toward u with step
// alpha) apply afterwards. u decays toward U between spikes, r toward 0.
StpSpikeResult stp_on_spike(const StpState& s, const StpParams& p,
                            double dt_since_prev_s);

struct StpTrace {
  std::vector<double> spike_times_s;
  std::vector<double> amplitudes;
  double tau_psc_s = 0.0;

  // Continuous PSC voltage: sum of amplitude-triggered exponentials.
  double value_at(double t_s) const;
  std::vector<double> sample(const std::vector<double>& times_s) const;
};

// Runs the iterative model over a strictly increasing spike train starting
// from rest. Throws std::invalid_argument if times are not strictly
// increasing or params are invalid.
StpTrace stp_trace(const std::vector<double>& spike_times_s,
                   const StpParams& p);

// ---------------------------------------------------------------------------
// Bistable stop-learning synapse

struct FusiParams {
  double jump_up = 0.07;    // a: increment on a pre-spike with elevated membrane
  double jump_down = 0.07;  // b: decrement on a pre-spike with low membrane
  double drift_up = 0.8;    // 1/s, refresh drift above theta_x
  double drift_down = 0.8;  // 1/s, refresh drift at or below theta_x
  double theta_v = 0.25;    // membrane threshold separating up/down branches
  double theta_x = 0.5;     // bistability threshold on x
  double ca_tau_s = 0.1;    // calcium low-pass time constant
  double ca_quantum = 1.0;  // calcium increment per postsynaptic spike
  // Stop-learning windows (strict inequalities on both sides).
  double theta_up_low = -1.0;
  double theta_up_high = 1e30;
  double theta_down_low = -1.0;
  double theta_down_high = 1e30;
};

void validate(const FusiParams& p);

struct FusiState {
  double x = 0.0;        // synaptic variable, clamped to [0, 1]
  double calcium = 0.0;  // low-passed postsynaptic activity
};

// One presynaptic spike: x jumps up by a if the membrane is elevated and the
// up-window allows it, down by b if the membrane is low and the down-window
// allows it. Gating flags come from the caller (calcium controller or
// explicit override). Result is clamped to [0, 1].
FusiState fusi_on_pre(const FusiState& s, const FusiParams& p,
                      bool v_mem_elevated, bool up_enabled, bool down_enabled);

// Refresh drift between spikes: x moves up with drift_up above theta_x,
// down with drift_down otherwise (x == theta_x drifts down). Clamped.
FusiState fusi_drift(const FusiState& s, const FusiParams& p, double dt_s);

// Binary efficacy readout.
inline bool fusi_efficacy(const FusiState& s, const FusiParams& p) {
  return s.x > p.theta_x;
}

struct CalciumStepResult {
  FusiState state;
  bool up_enabled = false;
  bool down_enabled = false;
};

// Calcium low-pass at step granularity: decay over dt, then add one quantum
// if a postsynaptic spike occurred in the step. Enables are evaluated on the
// updated value with strict window inequalities.
CalciumStepResult calcium_step(const FusiState& s, const FusiParams& p,
                               bool post_spiked, double dt_s);

}  // namespace scnm
