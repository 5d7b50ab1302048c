// SPDX-License-Identifier: Apache-2.0

#include "scnm/model_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scnm {

namespace {

bool bad(double v) { return std::isnan(v); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

double decay_toward(double value, double target, double tau_s, double dt_s) {
  if (tau_s <= 0.0) return value;  // decay disabled
  return target + (value - target) * std::exp(-dt_s / tau_s);
}

}  // namespace

void validate(const StpParams& p) {
  require(!bad(p.utilization) && p.utilization >= 0.0 && p.utilization <= 1.0,
          "stp: utilization must be in [0, 1]");
  require(!bad(p.alpha) && p.alpha >= 0.0 && p.alpha <= 1.0,
          "stp: alpha must be in [0, 1]");
  require(!bad(p.tau_facil_s), "stp: tau_facil_s is NaN");
  require(!bad(p.tau_depr_s), "stp: tau_depr_s is NaN");
  require(!bad(p.tau_psc_s), "stp: tau_psc_s is NaN");
  require(!bad(p.amplitude) && p.amplitude >= 0.0,
          "stp: amplitude must be >= 0");
}

StpState stp_rest_state(const StpParams& p) {
  validate(p);
  return StpState{p.utilization, 0.0, 0.0};
}

StpSpikeResult stp_on_spike(const StpState& s, const StpParams& p,
                            double dt_since_prev_s) {
  if (dt_since_prev_s < 0.0 || bad(dt_since_prev_s))
    throw std::invalid_argument("stp: negative inter-spike interval");
  const double u = decay_toward(s.u, p.utilization, p.tau_facil_s,
                                dt_since_prev_s);
  const double r = decay_toward(s.r, 0.0, p.tau_depr_s, dt_since_prev_s);
  StpSpikeResult res;
  res.psc_amplitude = p.amplitude * (u - r);
  res.state.u = u + p.utilization * (1.0 - u);
  res.state.r = (1.0 - p.alpha) * r + p.alpha * u;
  res.state.u = clamp01(res.state.u);
  res.state.r = clamp01(res.state.r);
  res.state.last_spike_s = s.last_spike_s + dt_since_prev_s;
  return res;
}

double StpTrace::value_at(double t_s) const {
  double v = 0.0;
  for (size_t i = 0; i < spike_times_s.size(); ++i) {
    if (spike_times_s[i] > t_s) break;
    if (tau_psc_s <= 0.0) {
      if (spike_times_s[i] == t_s) v += amplitudes[i];
      continue;
    }
    v += amplitudes[i] * std::exp(-(t_s - spike_times_s[i]) / tau_psc_s);
  }
  return v;
}

std::vector<double> StpTrace::sample(const std::vector<double>& times_s) const {
  std::vector<double> out;
  out.reserve(times_s.size());
  for (double t : times_s) out.push_back(value_at(t));
  return out;
}

StpTrace stp_trace(const std::vector<double>& spike_times_s,
                   const StpParams& p) {
  validate(p);
  StpTrace trace;
  trace.spike_times_s = spike_times_s;
  trace.tau_psc_s = p.tau_psc_s;
  trace.amplitudes.reserve(spike_times_s.size());
  StpState s = stp_rest_state(p);
  double prev = spike_times_s.empty() ? 0.0 : spike_times_s.front();
  for (size_t i = 0; i < spike_times_s.size(); ++i) {
    const double t = spike_times_s[i];
    if (i > 0 && t <= prev)
      throw std::invalid_argument("stp: spike times must strictly increase");
    const double dt = (i == 0) ? 0.0 : t - prev;
    StpSpikeResult r = stp_on_spike(s, p, dt);
    trace.amplitudes.push_back(r.psc_amplitude);
    s = r.state;
    prev = t;
  }
  return trace;
}

// ---------------------------------------------------------------------------

void validate(const FusiParams& p) {
  require(!bad(p.jump_up) && p.jump_up >= 0.0, "fusi: jump_up must be >= 0");
  require(!bad(p.jump_down) && p.jump_down >= 0.0,
          "fusi: jump_down must be >= 0");
  require(!bad(p.drift_up) && p.drift_up >= 0.0, "fusi: drift_up must be >= 0");
  require(!bad(p.drift_down) && p.drift_down >= 0.0,
          "fusi: drift_down must be >= 0");
  require(!bad(p.theta_x) && p.theta_x > 0.0 && p.theta_x < 1.0,
          "fusi: theta_x must be in (0, 1)");
  require(!bad(p.theta_v), "fusi: theta_v is NaN");
  require(!bad(p.ca_tau_s) && p.ca_tau_s > 0.0, "fusi: ca_tau_s must be > 0");
  require(!bad(p.ca_quantum) && p.ca_quantum >= 0.0,
          "fusi: ca_quantum must be >= 0");
  require(p.theta_up_low < p.theta_up_high, "fusi: empty up window");
  require(p.theta_down_low < p.theta_down_high, "fusi: empty down window");
}

FusiState fusi_on_pre(const FusiState& s, const FusiParams& p,
                      bool v_mem_elevated, bool up_enabled,
                      bool down_enabled) {
  FusiState out = s;
  if (v_mem_elevated) {
    if (up_enabled) out.x = clamp01(out.x + p.jump_up);
  } else {
    if (down_enabled) out.x = clamp01(out.x - p.jump_down);
  }
  return out;
}

FusiState fusi_drift(const FusiState& s, const FusiParams& p, double dt_s) {
  if (dt_s < 0.0 || bad(dt_s))
    throw std::invalid_argument("fusi: negative drift interval");
  FusiState out = s;
  if (out.x > p.theta_x)
    out.x = clamp01(out.x + p.drift_up * dt_s);
  else
    out.x = clamp01(out.x - p.drift_down * dt_s);
  return out;
}

CalciumStepResult calcium_step(const FusiState& s, const FusiParams& p,
                               bool post_spiked, double dt_s) {
  if (dt_s < 0.0 || bad(dt_s))
    throw std::invalid_argument("fusi: negative calcium step");
  CalciumStepResult res;
  res.state = s;
  res.state.calcium = s.calcium * std::exp(-dt_s / p.ca_tau_s);
  if (post_spiked) res.state.calcium += p.ca_quantum;
  const double c = res.state.calcium;
  res.up_enabled = c > p.theta_up_low && c < p.theta_up_high;
  res.down_enabled = c > p.theta_down_low && c < p.theta_down_high;
  return res;
}

}  // namespace scnm
