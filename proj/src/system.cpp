// SPDX-License-Identifier: Apache-2.0

#include "scnm/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scnm/rng.hpp"

namespace scnm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

constexpr double kActivityFloor = 1e-30;

}  // namespace

void validate(const DacSettings& d) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0 && !std::isnan(v); };
  require(in01(d.presyn_va), "dac: presyn_va must be in [0, 1]");
  require(in01(d.syn_va), "dac: syn_va must be in [0, 1]");
  require(in01(d.syn_vb), "dac: syn_vb must be in [0, 1]");
  require(in01(d.syn_valpha), "dac: syn_valpha must be in [0, 1]");
  require(in01(d.syn_vbeta), "dac: syn_vbeta must be in [0, 1]");
  require(in01(d.vcm), "dac: vcm must be in [0, 1]");
  require(in01(d.psc_scale), "dac: psc_scale must be in [0, 1]");
  require(in01(d.theta_v), "dac: theta_v must be in [0, 1]");
}

void set_dac_value(DacSettings& d, const std::string& name, double value) {
  if (name == "presyn_va") d.presyn_va = value;
  else if (name == "syn_va") d.syn_va = value;
  else if (name == "syn_vb") d.syn_vb = value;
  else if (name == "syn_valpha") d.syn_valpha = value;
  else if (name == "syn_vbeta") d.syn_vbeta = value;
  else if (name == "vcm") d.vcm = value;
  else if (name == "psc_scale") d.psc_scale = value;
  else if (name == "theta_v") d.theta_v = value;
  else throw std::invalid_argument("dac: unknown bias name '" + name + "'");
}

std::vector<std::string> dac_names() {
  return {"presyn_va", "syn_va",     "syn_vb",    "syn_valpha",
          "syn_vbeta", "vcm",        "psc_scale", "theta_v"};
}

void validate(const CalciumConfig& c) {
  require(c.tau_s > 0.0, "calcium: tau_s must be > 0");
  require(c.quantum >= 0.0, "calcium: quantum must be >= 0");
  require(c.up_low < c.up_high, "calcium: empty up window");
  require(c.down_low < c.down_high, "calcium: empty down window");
}

void validate(const ChipConfig& c) {
  require(c.clock_hz > 0.0, "chip: clock_hz must be > 0");
  require(c.speedup > 0.0, "chip: speedup must be > 0");
  require(c.mismatch_sigma >= 0.0 && c.mismatch_sigma <= 0.2,
          "chip: mismatch_sigma must be in [0, 0.2]");
  require(c.max_update_events >= 1, "chip: max_update_events must be >= 1");
  require(c.theta_x > 0.0 && c.theta_x < 1.0,
          "chip: theta_x must be in (0, 1)");
  require(c.leak.r_ref_ohm > 0.0, "chip: leak resistance must be > 0");
  require(c.leak.doubling_c > 0.0, "chip: leak doubling must be > 0");
  validate(c.dac);
  validate(c.stp);
  validate(c.neuron);
  validate(c.calcium);
  validate(c.driver);
}

// ---------------------------------------------------------------------------

ChipSim::ChipSim(const ChipConfig& cfg) : cfg_(cfg) {
  scnm::validate(cfg_);
  cycle_bio_s_ = kClocksPerCycle / cfg_.clock_hz;

  ScPresynConfig nominal;
  nominal.clock_hz = cfg_.clock_hz;
  const QuantizedStp q =
      quantize_stp_params(cfg_.stp, nominal, cfg_.max_update_events);
  quant_events_u_ = q.update_events_u;
  quant_events_r_ = q.update_events_r;
  period_u_ = q.decay_period_u;
  period_r_ = q.decay_period_r;
  period_psc_ = q.decay_period_psc;

  NormalRng rng(cfg_.seed);
  for (int r = 0; r < kRows; ++r) {
    mm_c_state_[r] = rng.mismatch_factor(cfg_.mismatch_sigma);
    mm_c_ratio_[r] = rng.mismatch_factor(cfg_.mismatch_sigma);
    mm_leak_[r] = rng.mismatch_factor(cfg_.mismatch_sigma);
    mm_c_refr_[r] = rng.mismatch_factor(cfg_.mismatch_sigma);
    mm_c_hebb_[r] = rng.mismatch_factor(cfg_.mismatch_sigma);
  }
  const size_t n_cells = size_t{kRows} * kCols;
  cell_mm_.resize(n_cells);
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kCols; ++c)
      cell_mm_[cell_index(r, c)] = rng.mismatch_factor(cfg_.mismatch_sigma);

  cells_.resize(n_cells);
  cell_leak_factor_.assign(n_cells, 1.0);
  cell_parked_.assign(n_cells, 0);
  cell_stable0_.assign(n_cells, 0);
  cell_stable1_.assign(n_cells, 0);
  for (size_t i = 0; i < n_cells; ++i)
    cells_[i].step_scale = 1.0 / cell_mm_[i];

  w_.assign(n_cells, WeightEntry{});

  rebuild_biases();

  for (int r = 0; r < kRows; ++r) presyn_[r] = presyn_init(presyn_cfg_[r], 0);

  ca_decay_ = std::exp(-cycle_bio_s_ / cfg_.calcium.tau_s);
  for (int c = 0; c < kCols; ++c) {
    up_en_[c] = cfg_.calcium.up_low < 0.0 && 0.0 < cfg_.calcium.up_high;
    down_en_[c] = cfg_.calcium.down_low < 0.0 && 0.0 < cfg_.calcium.down_high;
  }
}

void ChipSim::rebuild_biases() {
  cfg_.neuron.theta_v = cfg_.dac.theta_v;
  for (int r = 0; r < kRows; ++r) {
    ScPresynConfig pc;
    pc.c_state_f = pc.c_state_f * mm_c_state_[r];
    pc.c_ratio_f = pc.c_ratio_f * mm_c_ratio_[r];
    pc.decay_period_u = period_u_;
    pc.decay_period_r = period_r_;
    pc.decay_period_psc = period_psc_;
    pc.update_events_u = quant_events_u_;
    pc.update_events_r = quant_events_r_;
    pc.v_a = cfg_.dac.presyn_va;
    pc.leak = cfg_.leak;
    pc.leak.r_ref_ohm = cfg_.leak.r_ref_ohm * mm_leak_[r];
    pc.clock_hz = cfg_.clock_hz;
    pc.speedup = cfg_.speedup;
    pc.temperature_c = cfg_.temperature_c;
    presyn_cfg_[r] = pc;

    RowDriver d = cfg_.driver;
    d.c_refr_f *= mm_c_refr_[r];
    d.c_hebb_f *= mm_c_hebb_[r];
    d.v_alpha = cfg_.dac.syn_valpha;
    d.v_beta = cfg_.dac.syn_vbeta;
    d.v_a = cfg_.dac.syn_va;
    d.v_b = cfg_.dac.syn_vb;
    d.v_cm = cfg_.dac.vcm;
    scnm::validate(d);
    driver_[r] = d;
  }
  for (size_t i = 0; i < cells_.size(); ++i)
    refresh_cell_cache(static_cast<int>(i));
}

void ChipSim::refresh_cell_cache(int idx) {
  const int row = idx % kRows;
  const double c_cell = cfg_.driver.c_syn_f * cell_mm_[idx];
  const double wall_dt = cycle_bio_s_ / cfg_.speedup;
  const double f =
      cfg_.leak.factor(wall_dt, cfg_.temperature_c, c_cell);
  cell_leak_factor_[idx] = f;

  const RowDriver& d = driver_[row];
  const double scale = cells_[idx].step_scale;
  const double off = d.residual_offset;
  const double theta = cfg_.theta_x;
  const double x1 = 0.5 + 0.5 * f;
  cell_stable1_[idx] =
      (x1 + off > theta) && (x1 + d.drift_step_up() * scale >= 1.0);
  const double x0 = 0.5 * (1.0 - f);
  cell_stable0_[idx] =
      !(x0 + off > theta) && (x0 - d.drift_step_down() * scale <= 0.0);

  const double x = cells_[idx].x;
  cell_parked_[idx] = (x == 0.0 && cell_stable0_[idx]) ? 1
                      : (x == 1.0 && cell_stable1_[idx]) ? 2
                                                         : 0;
}

void ChipSim::submit_spike(double t_s, int row) {
  require(row >= 0 && row < kRows, "chip: input row out of range");
  require(t_s >= 0.0 && !std::isnan(t_s), "chip: input time must be >= 0");
  const double cycle_wall = cycle_bio_s_ / cfg_.speedup;
  const int64_t pc = static_cast<int64_t>(std::floor(t_s / cycle_wall)) + 1;
  if (pc < cycle_)
    throw std::invalid_argument("chip: input spike lands in a finished cycle");
  pending_.emplace_back(pc, row);
  std::push_heap(pending_.begin(), pending_.end(),
                 std::greater<std::pair<int64_t, int>>());
}

void ChipSim::submit_spikes(const std::vector<InputSpike>& spikes) {
  for (const InputSpike& s : spikes) submit_spike(s.t_s, s.row);
}

void ChipSim::set_weights(const WeightRam& ram) {
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kCols; ++c) w_[cell_index(r, c)] = ram.at(r, c);
}

WeightRam ChipSim::weights() const {
  WeightRam ram;
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kCols; ++c) ram.at(r, c) = w_[cell_index(r, c)];
  return ram;
}

void ChipSim::set_learn_override(bool up_enabled, bool down_enabled) {
  learn_override_ = true;
  override_up_ = up_enabled;
  override_down_ = down_enabled;
}

void ChipSim::clear_learn_override() { learn_override_ = false; }

void ChipSim::set_presyn_update_counts(int events_u, int events_r) {
  require(events_u >= 0 && events_r >= 0,
          "chip: update counts must be >= 0");
  quant_events_u_ = events_u;
  quant_events_r_ = events_r;
  for (int r = 0; r < kRows; ++r) {
    presyn_cfg_[r].update_events_u = events_u;
    presyn_cfg_[r].update_events_r = events_r;
  }
}

void ChipSim::set_cell_x(int row, int col, double x) {
  require(row >= 0 && row < kRows && col >= 0 && col < kCols,
          "chip: cell index out of range");
  require(x >= 0.0 && x <= 1.0 && !std::isnan(x),
          "chip: cell value must be in [0, 1]");
  const int idx = cell_index(row, col);
  cells_[idx].x = x;
  refresh_cell_cache(idx);
}

double ChipSim::cell_x(int row, int col) const {
  require(row >= 0 && row < kRows && col >= 0 && col < kCols,
          "chip: cell index out of range");
  return cells_[cell_index(row, col)].x;
}

void ChipSim::set_dac(const DacSettings& d) {
  scnm::validate(d);
  cfg_.dac = d;
  rebuild_biases();
}

QuantizedStp ChipSim::achieved_stp(int row) const {
  require(row >= 0 && row < kRows, "chip: row out of range");
  const ScPresynConfig& pc = presyn_cfg_[row];
  const double rho = pc.decay_ratio();
  QuantizedStp q;
  q.update_events_u = pc.update_events_u;
  q.update_events_r = pc.update_events_r;
  q.decay_period_u = pc.decay_period_u;
  q.decay_period_r = pc.decay_period_r;
  q.decay_period_psc = pc.decay_period_psc;
  q.achieved_utilization = achieved_fraction(pc.update_events_u, rho);
  q.achieved_alpha = achieved_fraction(pc.update_events_r, rho);
  const double lr = -std::log(rho);
  auto tau_of = [&](int64_t period) {
    return period > 0 ? static_cast<double>(period) / (cfg_.clock_hz * lr)
                      : 0.0;
  };
  q.achieved_tau_facil_s = tau_of(pc.decay_period_u);
  q.achieved_tau_depr_s = tau_of(pc.decay_period_r);
  q.achieved_tau_psc_s = tau_of(pc.decay_period_psc);
  return q;
}

const ScPresynState& ChipSim::presyn_state(int row) const {
  require(row >= 0 && row < kRows, "chip: row out of range");
  return presyn_[row];
}

const ScPresynConfig& ChipSim::presyn_config(int row) const {
  require(row >= 0 && row < kRows, "chip: row out of range");
  return presyn_cfg_[row];
}

const NeuronState& ChipSim::neuron_state(int col) const {
  require(col >= 0 && col < kCols, "chip: column out of range");
  return neurons_[col];
}

double ChipSim::calcium(int col) const {
  require(col >= 0 && col < kCols, "chip: column out of range");
  return calcium_[col];
}

bool ChipSim::up_enabled(int col) const {
  require(col >= 0 && col < kCols, "chip: column out of range");
  return learn_override_ ? override_up_ : up_en_[col] != 0;
}

bool ChipSim::down_enabled(int col) const {
  require(col >= 0 && col < kCols, "chip: column out of range");
  return learn_override_ ? override_down_ : down_en_[col] != 0;
}

std::vector<OutputSpike> ChipSim::drain_output_spikes() {
  std::vector<OutputSpike> out;
  out.swap(out_);
  return out;
}

void ChipSim::run_cycle() {
  const int64_t c = cycle_;
  const int64_t cycle_start_clk = c * kClocksPerCycle;

  // 1. Latch the input pulses registered for this cycle (collapsing
  // duplicates) and update the calcium controllers from the previous
  // cycle's output spikes.
  std::array<uint8_t, kRows> spiking{};
  std::array<int, kRows> spike_list;
  int n_spiking = 0;
  const auto heap_cmp = std::greater<std::pair<int64_t, int>>();
  while (!pending_.empty() && pending_.front().first == c) {
    std::pop_heap(pending_.begin(), pending_.end(), heap_cmp);
    const int row = pending_.back().second;
    pending_.pop_back();
    if (!spiking[row]) {
      spiking[row] = 1;
      spike_list[n_spiking++] = row;
    }
  }

  for (int col = 0; col < kCols; ++col) {
    double ca = calcium_[col] * ca_decay_;
    if (spiked_prev_[col]) ca += cfg_.calcium.quantum;
    calcium_[col] = ca;
    up_en_[col] = cfg_.calcium.up_low < ca && ca < cfg_.calcium.up_high;
    down_en_[col] = cfg_.calcium.down_low < ca && ca < cfg_.calcium.down_high;
    spiked_prev_[col] = 0;
  }
  const bool up_ov = learn_override_ ? override_up_ : false;
  const bool down_ov = learn_override_ ? override_down_ : false;

  // 2. Presynaptic updates for the latched rows, in row order.
  for (int i = 0; i < n_spiking; ++i) {
    const int row = spike_list[i];
    const double amp =
        presyn_on_spike(presyn_[row], presyn_cfg_[row], cycle_start_clk);
    amp_log_.push_back(AmplitudeEvent{c, row, amp});
  }

  // Per-row output-node contribution for this cycle.
  std::array<double, kRows> psc_gain;
  const double gain = cfg_.dac.psc_scale / 15.0;
  for (int row = 0; row < kRows; ++row) {
    const double v = presyn_[row].v_psc;
    psc_gain[row] = (v >= kActivityFloor || v <= -kActivityFloor) ? v * gain
                                                                  : 0.0;
  }

  // 3. Column slots: membrane decay, hebbian branch read, cell updates,
  // weighted PSC integration, threshold check.
  for (int col = 0; col < kCols; ++col) {
    const double slot_s = cycle_bio_s_ * (c + (col + 1) / 64.0);
    NeuronState& n = neurons_[col];
    const bool refractory =
        neuron_decay(n, cfg_.neuron, cycle_bio_s_, slot_s);
    const bool elevated = membrane_elevated(n, cfg_.neuron);
    const bool up_en = learn_override_ ? up_ov : up_en_[col] != 0;
    const bool down_en = learn_override_ ? down_ov : down_en_[col] != 0;

    double charge = 0.0;
    const size_t base = static_cast<size_t>(col) * kRows;
    for (int row = 0; row < kRows; ++row) {
      const size_t idx = base + row;
      const bool pre = spiking[row] != 0;
      bool comp;
      if (!pre && force_ == ForceMode::kNone && cell_parked_[idx]) {
        if (psc_gain[row] == 0.0) continue;
        comp = cell_parked_[idx] == 2;
      } else {
        SynapseCell& cell = cells_[idx];
        leak_cell(cell, cell_leak_factor_[idx]);
        comp = process_synapse(cell, driver_[row], cfg_.theta_x, pre,
                               elevated, up_en, down_en, force_);
        cell_parked_[idx] = (cell.x == 0.0 && cell_stable0_[idx]) ? 1
                            : (cell.x == 1.0 && cell_stable1_[idx]) ? 2
                                                                    : 0;
      }
      if (psc_gain[row] != 0.0) {
        const int w = select_weight(comp, w_[idx]);
        if (w != 0) charge += w * psc_gain[row];
      }
    }

    if (!refractory && neuron_deliver(n, cfg_.neuron, charge, slot_s)) {
      out_.push_back(OutputSpike{c, col});
      spiked_prev_[col] = 1;
    }
  }

  // 4. Advance the presynaptic channels to the end of the cycle, firing
  // every decay event due in the window.
  const int64_t cycle_end_clk = cycle_start_clk + kClocksPerCycle;
  for (int row = 0; row < kRows; ++row)
    presyn_tick(presyn_[row], presyn_cfg_[row], cycle_end_clk);

  ++cycle_;
}

void ChipSim::run_cycles(int64_t n) {
  for (int64_t i = 0; i < n; ++i) run_cycle();
}

void ChipSim::run_until_cycle(int64_t target) {
  while (cycle_ < target) run_cycle();
}

}  // namespace scnm
