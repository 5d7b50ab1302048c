// SPDX-License-Identifier: Apache-2.0

#include "scnm/sc_presyn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scnm/model_core.hpp"

namespace scnm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double LeakModel::resistance_ohm(double temperature_c) const {
  return r_ref_ohm / std::exp2((temperature_c - temp_ref_c) / doubling_c);
}

double LeakModel::tau_s(double temperature_c, double c_farad) const {
  return resistance_ohm(temperature_c) * c_farad;
}

double LeakModel::factor(double dt_wall_s, double temperature_c,
                         double c_farad) const {
  if (!enabled || dt_wall_s == 0.0) return 1.0;
  return std::exp(-dt_wall_s / tau_s(temperature_c, c_farad));
}

void validate(const ScPresynConfig& cfg) {
  require(cfg.c_state_f > 0.0, "presyn: c_state_f must be > 0");
  require(cfg.c_ratio_f > 0.0, "presyn: c_ratio_f must be > 0");
  require(cfg.decay_period_u >= 0 && cfg.decay_period_r >= 0 &&
              cfg.decay_period_psc >= 0,
          "presyn: decay periods must be >= 0");
  require(cfg.update_events_u >= 0 && cfg.update_events_r >= 0,
          "presyn: update event counts must be >= 0");
  require(cfg.v_a >= 0.0 && cfg.v_a <= 1.0, "presyn: v_a must be in [0, 1]");
  require(cfg.clock_hz > 0.0, "presyn: clock_hz must be > 0");
  require(cfg.speedup > 0.0, "presyn: speedup must be > 0");
  require(cfg.leak.r_ref_ohm > 0.0, "presyn: leak resistance must be > 0");
  require(cfg.leak.doubling_c > 0.0, "presyn: leak doubling must be > 0");
}

int64_t period_for_tau(double tau_s, double clock_hz, double ratio) {
  if (tau_s <= 0.0) return 0;
  require(ratio > 0.0 && ratio < 1.0, "presyn: ratio must be in (0, 1)");
  const double period = -tau_s * clock_hz * std::log(ratio);
  return std::max<int64_t>(1, std::llround(period));
}

int quantize_step_count(double frac, double ratio, int max_events) {
  require(frac >= 0.0 && frac <= 1.0, "presyn: fraction must be in [0, 1]");
  require(max_events >= 1, "presyn: max_events must be >= 1");
  if (frac >= 1.0) return max_events;
  if (frac <= 0.0) return 0;
  const double k = std::log(1.0 - frac) / std::log(ratio);
  return std::clamp<int>(static_cast<int>(std::lround(k)), 1, max_events);
}

double achieved_fraction(int k, double ratio) {
  return 1.0 - std::pow(ratio, k);
}

ScPresynState presyn_init(const ScPresynConfig& cfg, int64_t start_clk) {
  validate(cfg);
  ScPresynState s;
  s.now_clk = start_clk;
  auto first = [start_clk](int64_t period) {
    if (period <= 0) return kNever;
    return (start_clk / period + 1) * period;
  };
  s.next_decay_u = first(cfg.decay_period_u);
  s.next_decay_r = first(cfg.decay_period_r);
  s.next_decay_psc = first(cfg.decay_period_psc);
  return s;
}

namespace {

void apply_leak(ScPresynState& s, const ScPresynConfig& cfg, int64_t dt_clk) {
  if (dt_clk <= 0 || !cfg.leak.enabled) return;
  const double f =
      cfg.leak.factor(cfg.wall_dt_s(dt_clk), cfg.temperature_c, cfg.c_state_f);
  s.v_u *= f;
  s.v_r *= f;
  s.v_psc *= f;
}

}  // namespace

void presyn_tick(ScPresynState& s, const ScPresynConfig& cfg, int64_t now_clk) {
  if (now_clk < s.now_clk)
    throw std::invalid_argument("presyn: tick into the past");
  const double rho = cfg.decay_ratio();
  for (;;) {
    const int64_t next = std::min({s.next_decay_u, s.next_decay_r,
                                   s.next_decay_psc});
    if (next > now_clk) break;
    apply_leak(s, cfg, next - s.now_clk);
    s.now_clk = next;
    if (s.next_decay_u == next) {
      s.v_u *= rho;
      s.next_decay_u += cfg.decay_period_u;
    }
    if (s.next_decay_r == next) {
      s.v_r *= rho;
      s.next_decay_r += cfg.decay_period_r;
    }
    if (s.next_decay_psc == next) {
      s.v_psc *= rho;
      s.next_decay_psc += cfg.decay_period_psc;
    }
  }
  apply_leak(s, cfg, now_clk - s.now_clk);
  s.now_clk = now_clk;
}

double presyn_on_spike(ScPresynState& s, const ScPresynConfig& cfg,
                       int64_t spike_clk) {
  presyn_tick(s, cfg, spike_clk);
  const double rho = cfg.decay_ratio();
  const double share = 1.0 - rho;
  for (int i = 0; i < cfg.update_events_u; ++i)
    s.v_u = rho * s.v_u + share * cfg.v_a;
  double amp = 0.0;
  if (cfg.transfer == PscTransfer::kBeforeDeprUpdate) {
    amp = s.v_u - s.v_r;
    s.v_psc = amp;
  }
  for (int i = 0; i < cfg.update_events_r; ++i)
    s.v_r = rho * s.v_r + share * s.v_u;
  if (cfg.transfer == PscTransfer::kAfterDeprUpdate) {
    amp = s.v_u - s.v_r;
    s.v_psc = amp;
  }
  return amp;
}

QuantizedStp quantize_stp_params(const StpParams& req,
                                 const ScPresynConfig& templ, int max_events) {
  validate(req);
  const double rho = templ.decay_ratio();
  QuantizedStp q;
  q.update_events_u = quantize_step_count(req.utilization, rho, max_events);
  q.update_events_r = quantize_step_count(req.alpha, rho, max_events);
  q.decay_period_u = period_for_tau(req.tau_facil_s, templ.clock_hz, rho);
  q.decay_period_r = period_for_tau(req.tau_depr_s, templ.clock_hz, rho);
  q.decay_period_psc = period_for_tau(req.tau_psc_s, templ.clock_hz, rho);
  q.achieved_utilization = achieved_fraction(q.update_events_u, rho);
  q.achieved_alpha = achieved_fraction(q.update_events_r, rho);
  const double lr = -std::log(rho);
  auto tau_of = [&](int64_t period) {
    return period > 0 ? static_cast<double>(period) / (templ.clock_hz * lr)
                      : 0.0;
  };
  q.achieved_tau_facil_s = tau_of(q.decay_period_u);
  q.achieved_tau_depr_s = tau_of(q.decay_period_r);
  q.achieved_tau_psc_s = tau_of(q.decay_period_psc);
  return q;
}

}  // namespace scnm
