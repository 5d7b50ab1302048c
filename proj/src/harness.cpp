// SPDX-License-Identifier: Apache-2.0

#include "scnm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace scnm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double vec_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double vec_stddev(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

// ---------------------------------------------------------------------------

FitResult fit_exponential(const std::vector<Sample>& samples) {
  require(samples.size() >= 4, "fit: need at least 4 samples");
  for (size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].value > 0.0, "fit: values must be positive");
    if (i > 0)
      require(samples[i].t_s > samples[i - 1].t_s,
              "fit: times must strictly increase");
  }
  const double t0 = samples.front().t_s;
  const double n = static_cast<double>(samples.size());

  // Log-linear regression seeds the time constant.
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const Sample& s : samples) {
    const double t = s.t_s - t0;
    const double y = std::log(s.value);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  require(slope < 0.0, "fit: samples do not decay");
  const double tau0 = -1.0 / slope;

  // Least squares in linear space: for fixed tau the best amplitude is
  // closed-form, so search only over tau (golden section on log tau).
  auto sse = [&samples, t0](double tau, double* amp_out) {
    double see = 0.0, sye = 0.0;
    for (const Sample& s : samples) {
      const double e = std::exp(-(s.t_s - t0) / tau);
      see += e * e;
      sye += s.value * e;
    }
    const double amp = sye / see;
    double r = 0.0;
    for (const Sample& s : samples) {
      const double d = s.value - amp * std::exp(-(s.t_s - t0) / tau);
      r += d * d;
    }
    if (amp_out) *amp_out = amp;
    return r;
  };

  const double phi = 0.6180339887498949;
  double lo = std::log(tau0) - 3.0;
  double hi = std::log(tau0) + 3.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = sse(std::exp(x1), nullptr);
  double f2 = sse(std::exp(x2), nullptr);
  for (int it = 0; it < 160; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = sse(std::exp(x1), nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = sse(std::exp(x2), nullptr);
    }
  }
  FitResult res;
  res.tau_s = std::exp(0.5 * (lo + hi));
  sse(res.tau_s, &res.amplitude);
  return res;
}

// ---------------------------------------------------------------------------
// Time-constant extraction

namespace {

// Chip configuration shared by the probing protocols: facilitation pinned at
// maximum so every pulse re-tops the facilitation node, and a counting
// neuron tuned so the output count is near-linear in the probe amplitude:
//  - no refractory period, so no charge is lost while recovering,
//  - per-cycle charge is kept far below the firing threshold; the hard
//    reset discards the above-threshold overshoot on every output spike, so
//    the count gain bends with amplitude in proportion to the per-cycle
//    charge (measured: ~4% gain shift over the full amplitude range at
//    0.07, vs ~18% at 0.28),
//  - the output trace (35 ms) dies out inside its own counting window at
//    the default 5 Hz probe rate and leaves no carry into the next one.
ChipConfig probe_chip_config(double tau_setting_s, double temperature_c,
                             bool leak_enabled, double mismatch_sigma,
                             uint64_t seed, double alpha) {
  ChipConfig cfg;
  cfg.temperature_c = temperature_c;
  cfg.seed = seed;
  cfg.mismatch_sigma = mismatch_sigma;
  cfg.leak.enabled = leak_enabled;
  cfg.stp.utilization = 1.0;
  cfg.stp.alpha = alpha;
  cfg.stp.tau_facil_s = 0.01;
  cfg.stp.tau_depr_s = tau_setting_s;
  cfg.stp.tau_psc_s = 0.035;
  cfg.dac.psc_scale = 0.07;
  cfg.neuron.tau_mem_s = 3.0;
  cfg.neuron.v_thresh_spike = 0.3;
  cfg.neuron.refractory_s = 0.0;
  return cfg;
}

struct Window {
  int64_t begin = 0;
  int64_t end = 0;
};

}  // namespace

TauEnsembleResult extract_time_constant_ensemble(const TauProtocol& p) {
  require(p.circuits >= 1 && p.circuits <= ChipSim::kCols,
          "tau protocol: circuits must be in [1, 64]");
  require(p.repetitions >= 1, "tau protocol: repetitions must be >= 1");
  require(p.probe_hz > 0.0 && p.charge_hz > 0.0,
          "tau protocol: rates must be > 0");
  require(p.baseline_probes >= 1, "tau protocol: need baseline probes");
  require(p.relax_probes >= 4, "tau protocol: need at least 4 relax probes");
  require(p.charge_spikes >= 1, "tau protocol: need charge spikes");

  ChipConfig cfg = probe_chip_config(p.tau_setting_s, p.temperature_c,
                                     p.leak_enabled, p.mismatch_sigma, p.seed,
                                     p.alpha);
  ChipSim sim(cfg);
  sim.set_learn_override(false, false);
  WeightRam ram;
  for (int r = 0; r < p.circuits; ++r) {
    ram.at(r, r).ltp = 15;
    ram.at(r, r).ltd = 15;
  }
  const WeightRam blank;
  sim.set_weights(ram);

  const int k_u = cfg.max_update_events;
  const int k_r = sim.achieved_stp(0).update_events_r;
  const double cw = sim.cycle_wall_s();
  const double cb = sim.cycle_bio_s();
  auto pc = [cw](double t) {
    return static_cast<int64_t>(std::floor(t / cw)) + 1;
  };
  const double probe_dt = 1.0 / p.probe_hz;

  // Expected relaxation time constant (programmed decay composed with the
  // junction leak), used to size the settle gap between repetitions.
  double tau_expected = p.tau_setting_s;
  if (cfg.leak.enabled) {
    const double tau_leak =
        cfg.leak.tau_s(cfg.temperature_c, ScPresynConfig{}.c_state_f);
    tau_expected = tau_expected > 0.0
                       ? 1.0 / (1.0 / tau_expected + 1.0 / tau_leak)
                       : tau_leak;
  }
  require(tau_expected > 0.0,
          "tau protocol: nothing relaxes (decay off and leak off)");

  // Every probe of every repetition sits on one continuous probe_dt lattice,
  // so every counting window sees the same cycle phasing and the same
  // carried-over membrane residue; count-vs-amplitude conversion is then
  // identical for baseline and relaxation windows, and the deficit has no
  // additive offset for the exponential fit to mistake for a faster decay.
  // Two warm-up probes per repetition let the carry chain settle first.
  const int kWarmupProbes = 2;

  std::vector<std::vector<Window>> base_w(p.repetitions),
      relax_w(p.repetitions);
  // Relax probe time relative to the end of the charging burst, per rep.
  std::vector<std::vector<double>> relax_t(p.repetitions);
  std::vector<OutputSpike> all_spikes;

  int64_t slot = 1;  // lattice index of the next probe
  auto slot_time = [probe_dt](int64_t k) {
    return static_cast<double>(k) * probe_dt;
  };
  for (int rep = 0; rep < p.repetitions; ++rep) {
    std::vector<double> probes;  // warm-up + baseline
    for (int j = 0; j < kWarmupProbes + p.baseline_probes; ++j)
      probes.push_back(slot_time(slot++));
    std::vector<double> ct(p.charge_spikes);
    for (int i = 0; i < p.charge_spikes; ++i)
      ct[i] = slot_time(slot) + i / p.charge_hz;
    // Relaxation probes resume on the lattice after a half-slot guard; the
    // burst runs unweighted, so only the probe spacing itself matters.
    while (slot_time(slot) < ct.back() + 0.5 * probe_dt) ++slot;
    std::vector<double> rt(p.relax_probes);
    for (int j = 0; j < p.relax_probes; ++j) rt[j] = slot_time(slot++);
    // Idle until the depression node has relaxed to its floor; a residue
    // under the next repetition's baselines would shift every deficit by a
    // constant, which an exponential fit mistakes for a faster decay.
    const double t_settled = ct.back() + 6.5 * tau_expected;
    while (slot_time(slot) + kWarmupProbes * probe_dt < t_settled) ++slot;
    const double t_end = slot_time(slot);

    for (double t : probes)
      for (int r = 0; r < p.circuits; ++r) sim.submit_spike(t, r);
    for (double t : ct)
      for (int r = 0; r < p.circuits; ++r) sim.submit_spike(t, r);
    for (double t : rt)
      for (int r = 0; r < p.circuits; ++r) sim.submit_spike(t, r);

    const double t_charge_proc = static_cast<double>(pc(ct.back())) * cb;
    for (int j = 0; j < p.baseline_probes; ++j) {
      const double t = probes[kWarmupProbes + j];
      base_w[rep].push_back(Window{pc(t), pc(t + probe_dt)});
    }
    for (int j = 0; j < p.relax_probes; ++j) {
      relax_w[rep].push_back(Window{pc(rt[j]), pc(rt[j] + probe_dt)});
      relax_t[rep].push_back(static_cast<double>(pc(rt[j])) * cb -
                             t_charge_proc);
    }

    // Probing phases run with depression pulses off so probes leave the
    // depression node untouched; only the charging burst applies them. The
    // weights are blanked for the burst (and its trace tail) so it deposits
    // nothing on the counting neuron; the swap waits for the last baseline
    // window to finish, and the restore waits for the first relax probe, so
    // no counted window ever runs partially blanked.
    sim.set_presyn_update_counts(k_u, 0);
    sim.run_until_cycle(pc(ct.front()));
    sim.set_presyn_update_counts(k_u, k_r);
    sim.set_weights(blank);
    sim.run_until_cycle(pc(ct.back()) + 1);
    sim.set_presyn_update_counts(k_u, 0);
    sim.run_until_cycle(pc(rt.front()));
    sim.set_weights(ram);
    sim.run_until_cycle(pc(t_end));

    std::vector<OutputSpike> drained = sim.drain_output_spikes();
    all_spikes.insert(all_spikes.end(), drained.begin(), drained.end());
  }

  std::vector<std::vector<int64_t>> by_col(ChipSim::kCols);
  for (const OutputSpike& s : all_spikes) by_col[s.neuron].push_back(s.cycle);

  TauEnsembleResult res;
  res.protocol = p;
  for (int r = 0; r < p.circuits; ++r) {
    TauCircuitResult cr;
    cr.row = r;
    const std::vector<int64_t>& cyc = by_col[r];
    auto count_in = [&cyc](const Window& w) {
      auto lo = std::lower_bound(cyc.begin(), cyc.end(), w.begin);
      auto hi = std::lower_bound(cyc.begin(), cyc.end(), w.end);
      return static_cast<double>(hi - lo);
    };
    // Deficits averaged over repetitions: single counts carry +/-1 count of
    // threshold quantization noise, the average is fit-grade.
    cr.deficits.assign(static_cast<size_t>(p.relax_probes), Sample{});
    for (int rep = 0; rep < p.repetitions; ++rep) {
      double n_base = 0.0;
      for (const Window& w : base_w[rep]) n_base += count_in(w);
      n_base /= p.baseline_probes;
      for (int j = 0; j < p.relax_probes; ++j) {
        cr.deficits[j].t_s += relax_t[rep][j];
        cr.deficits[j].value += n_base - count_in(relax_w[rep][j]);
      }
    }
    for (Sample& d : cr.deficits) {
      d.t_s /= p.repetitions;
      d.value /= p.repetitions;
    }
    std::vector<Sample> pts = cr.deficits;
    while (!pts.empty() && pts.back().value <= 0.25) pts.pop_back();
    if (pts.size() >= 4) {
      try {
        cr.tau_s = fit_exponential(pts).tau_s;
        cr.valid = true;
      } catch (const std::invalid_argument&) {
      }
    }
    res.circuits.push_back(cr);
  }

  std::vector<double> fits;
  for (const TauCircuitResult& c : res.circuits)
    if (c.valid) fits.push_back(c.tau_s);
  res.tau_mean_s = vec_mean(fits);
  res.tau_std_s = vec_stddev(fits, res.tau_mean_s);
  return res;
}

// ---------------------------------------------------------------------------
// Figures

StpParams figure_stp_params(const std::string& kind) {
  if (kind == "facilitating")
    return StpParams{0.29, 0.5, 0.3, 0.3, 0.01, 1.0};
  if (kind == "depressing")
    return StpParams{0.96, 0.5, 0.01, 0.49, 0.013, 1.0};
  throw std::invalid_argument("figure: unknown dynamics kind '" + kind + "'");
}

StpFigureData run_stp_figure(const std::string& kind) {
  const StpParams nominal = figure_stp_params(kind);
  ChipConfig cfg;
  cfg.mismatch_sigma = 0.0;
  cfg.leak.enabled = false;
  cfg.stp = nominal;

  // The decay grid free-runs against the 50 Hz pulse grid, so a single
  // sweep's amplitudes wobble by one decay event per interval. Amplitudes
  // are therefore averaged over sweeps covering every integer cycle phase
  // of the slowest decay period (scope-style sweep averaging); the trace
  // comes from the first sweep.
  StpFigureData data;
  const int n_spikes = 10;
  int sweeps = 1;
  {
    ChipSim probe(cfg);
    const int64_t period = std::max(probe.achieved_stp(0).decay_period_u,
                                    probe.achieved_stp(0).decay_period_r);
    sweeps = std::max<int>(
        1, std::llround(static_cast<double>(period) / ChipSim::kClocksPerCycle));
  }
  std::vector<double> amp_sum(n_spikes, 0.0);
  for (int k = 0; k < sweeps; ++k) {
    ChipSim sim(cfg);
    const double cw = sim.cycle_wall_s();
    const double phase = k * cw;
    std::vector<double> submit_times(n_spikes);
    for (int i = 0; i < n_spikes; ++i) {
      submit_times[i] = phase + 0.001 + 0.02 * i;
      sim.submit_spike(submit_times[i], 0);
    }
    const int64_t last_pc =
        static_cast<int64_t>(std::floor(submit_times.back() / cw)) + 1;
    const int64_t end_cycle =
        last_pc + static_cast<int64_t>(std::ceil(0.08 / cw));

    while (sim.cycle() < end_cycle) {
      sim.run_cycle();
      if (k == 0) {
        data.trace_times_s.push_back(sim.now_bio_s());
        data.chip_trace.push_back(sim.presyn_state(0).v_psc);
      }
    }

    const std::vector<AmplitudeEvent>& log = sim.amplitude_log();
    if (static_cast<int>(log.size()) != n_spikes)
      throw std::runtime_error("figure: pulse collapsed into a shared cycle");
    for (int i = 0; i < n_spikes; ++i) {
      amp_sum[i] += log[i].amplitude;
      if (k == 0)
        data.spike_times_s.push_back(static_cast<double>(log[i].cycle) *
                                     sim.cycle_bio_s());
    }
  }
  for (double a : amp_sum) data.chip_amplitudes.push_back(a / sweeps);

  const StpTrace model = stp_trace(data.spike_times_s, nominal);
  data.model_amplitudes = model.amplitudes;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < model.amplitudes.size(); ++i) {
    num += data.chip_amplitudes[i] * model.amplitudes[i];
    den += model.amplitudes[i] * model.amplitudes[i];
  }
  data.fitted_scale = den > 0.0 ? num / den : 1.0;
  data.model_trace.reserve(data.trace_times_s.size());
  for (double t : data.trace_times_s)
    data.model_trace.push_back(data.fitted_scale * model.value_at(t));
  return data;
}

std::vector<RecoveryFigureData> run_recovery_figure(double temperature_c) {
  std::vector<RecoveryFigureData> out;
  for (double setting : {0.3, 0.6, 0.0}) {
    ChipConfig cfg =
        probe_chip_config(setting, temperature_c, true, 0.0, 1, 0.5);
    ChipSim sim(cfg);
    const int k_u = cfg.max_update_events;
    const int k_r = sim.achieved_stp(0).update_events_r;
    const double cw = sim.cycle_wall_s();
    const double cb = sim.cycle_bio_s();
    auto pc = [cw](double t) {
      return static_cast<int64_t>(std::floor(t / cw)) + 1;
    };
    const double probe_dt = 0.5;
    const int n_base = 3, n_charge = 10, n_relax = 10;

    std::vector<double> bt(n_base), ct(n_charge), rt(n_relax);
    for (int j = 0; j < n_base; ++j) bt[j] = probe_dt + j * probe_dt;
    const double t_after_base = probe_dt + n_base * probe_dt;
    for (int i = 0; i < n_charge; ++i) ct[i] = t_after_base + i / 12.5;
    for (int j = 0; j < n_relax; ++j) rt[j] = ct.back() + (j + 1) * probe_dt;
    const double t_end = ct.back() + (n_relax + 1) * probe_dt;

    for (double t : bt) sim.submit_spike(t, 0);
    for (double t : ct) sim.submit_spike(t, 0);
    for (double t : rt) sim.submit_spike(t, 0);

    sim.set_presyn_update_counts(k_u, 0);
    sim.run_until_cycle(pc(bt.back()) + 1);
    sim.set_presyn_update_counts(k_u, k_r);
    sim.run_until_cycle(pc(ct.back()) + 1);
    sim.set_presyn_update_counts(k_u, 0);
    sim.run_until_cycle(pc(t_end));

    const std::vector<AmplitudeEvent>& log = sim.amplitude_log();
    if (log.size() != static_cast<size_t>(n_base + n_charge + n_relax))
      throw std::runtime_error("recovery figure: missing pulses");
    double base = 0.0;
    for (int j = 0; j < n_base; ++j) base += log[j].amplitude;
    base /= n_base;
    const double t_charge_end =
        static_cast<double>(log[n_base + n_charge - 1].cycle) * cb;

    RecoveryFigureData fig;
    fig.tau_setting_s = setting;
    std::vector<Sample> deficits;
    for (int j = 0; j < n_relax; ++j) {
      const AmplitudeEvent& e = log[n_base + n_charge + j];
      const double t_rel = static_cast<double>(e.cycle) * cb - t_charge_end;
      fig.probe_times_s.push_back(t_rel);
      fig.probe_gain.push_back(e.amplitude / base);
      deficits.push_back(Sample{t_rel, base - e.amplitude});
    }
    try {
      fig.fitted_tau_s = fit_exponential(deficits).tau_s;
    } catch (const std::invalid_argument&) {
      fig.fitted_tau_s = std::nullopt;
    }
    out.push_back(std::move(fig));
  }
  return out;
}

std::vector<TauSweepPoint> sweep_temperature(
    const std::vector<double>& temps_c, const std::vector<double>& settings_s,
    const TauProtocol& base) {
  std::vector<TauSweepPoint> out;
  for (double temp : temps_c)
    for (double setting : settings_s) {
      TauProtocol p = base;
      p.temperature_c = temp;
      p.tau_setting_s = setting;
      // Slow rows (long settings, cold leak-only) are probed slower so the
      // relax train spans the decay, with fewer repetitions to bound
      // runtime.
      double tau_exp = setting;
      if (p.leak_enabled) {
        const double tau_leak =
            LeakModel{}.tau_s(temp, ScPresynConfig{}.c_state_f);
        tau_exp = setting > 0.0 ? 1.0 / (1.0 / setting + 1.0 / tau_leak)
                                : tau_leak;
      }
      if (tau_exp > 0.8) {
        p.probe_hz = 2.5 / tau_exp;
        p.relax_probes = 10;
        p.repetitions = 4;
      }
      const TauEnsembleResult r = extract_time_constant_ensemble(p);
      out.push_back(TauSweepPoint{temp, setting, r.tau_mean_s, r.tau_std_s});
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Chip used by the single-cell plasticity figures: constant unit-amplitude
// pulses (facilitation pinned, no depression), one diagonal weight.
ChipConfig cell_figure_config() {
  ChipConfig cfg;
  cfg.mismatch_sigma = 0.0;
  cfg.stp.utilization = 1.0;
  cfg.stp.alpha = 0.0;
  cfg.stp.tau_facil_s = 0.01;
  cfg.stp.tau_depr_s = 0.0;
  cfg.stp.tau_psc_s = 0.01;
  return cfg;
}

CellTraceData trace_cell_run(ChipSim& sim, double duration_s,
                             const std::vector<double>& pulses,
                             const std::vector<std::pair<double, ForceMode>>&
                                 force_schedule) {
  CellTraceData data;
  data.pulse_times_s = pulses;
  for (double t : pulses) sim.submit_spike(t, 0);
  const double cw = sim.cycle_wall_s();
  const int64_t n_cycles = static_cast<int64_t>(std::ceil(duration_s / cw));
  size_t next_force = 0;
  while (sim.cycle() < n_cycles) {
    const double t_now = static_cast<double>(sim.cycle()) * cw;
    while (next_force < force_schedule.size() &&
           force_schedule[next_force].first <= t_now) {
      sim.set_force_mode(force_schedule[next_force].second);
      ++next_force;
    }
    sim.run_cycle();
    data.t_s.push_back(sim.now_bio_s());
    data.x.push_back(sim.cell_x(0, 0));
    data.calcium.push_back(sim.calcium(0));
    data.up_enabled.push_back(sim.up_enabled(0) ? 1 : 0);
  }
  return data;
}

}  // namespace

CellTraceData run_forced_transition_figure() {
  ChipConfig cfg = cell_figure_config();
  ChipSim sim(cfg);
  sim.set_learn_override(true, true);
  std::vector<double> pulses;
  // The second packet waits for the bistable drift to rail the cell high so
  // the trace shows both stable states, not just the jumps.
  for (int i = 0; i < 12; ++i) pulses.push_back(0.05 + 0.005 * i);
  for (int i = 0; i < 12; ++i) pulses.push_back(0.45 + 0.005 * i);
  return trace_cell_run(sim, 0.8, pulses,
                        {{0.0, ForceMode::kUp}, {0.25, ForceMode::kDown}});
}

CellTraceData run_stop_learning_figure() {
  ChipConfig cfg = cell_figure_config();
  cfg.dac.psc_scale = 0.075;
  cfg.neuron.tau_mem_s = 0.02;
  cfg.neuron.v_thresh_spike = 1.0;
  cfg.neuron.refractory_s = 0.001;
  cfg.calcium.tau_s = 0.1;
  cfg.calcium.quantum = 1.0;
  cfg.calcium.up_high = 1.5;
  cfg.calcium.down_high = 0.4;
  ChipSim sim(cfg);
  WeightRam ram;
  ram.at(0, 0).ltp = 15;
  ram.at(0, 0).ltd = 15;
  sim.set_weights(ram);
  std::vector<double> pulses;
  for (int i = 0; i < 12; ++i) pulses.push_back(0.05 + 0.01 * i);
  for (int i = 0; i < 16; ++i) pulses.push_back(1.0 + 0.002 * i);
  return trace_cell_run(sim, 1.9, pulses, {});
}

// ---------------------------------------------------------------------------
// CSV output

namespace {

void write_stp_csv(const StpFigureData& d, const std::string& out_dir) {
  std::ofstream amps(out_dir + "/amplitudes.csv");
  amps << "index,time,chip,model,model_scaled\n";
  char buf[160];
  for (size_t i = 0; i < d.chip_amplitudes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%.9f,%.9f\n", i,
                  d.spike_times_s[i], d.chip_amplitudes[i],
                  d.model_amplitudes[i],
                  d.fitted_scale * d.model_amplitudes[i]);
    amps << buf;
  }
  std::ofstream trace(out_dir + "/trace.csv");
  trace << "time,chip_psc,model_psc_scaled\n";
  for (size_t i = 0; i < d.trace_times_s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f\n", d.trace_times_s[i],
                  d.chip_trace[i], d.model_trace[i]);
    trace << buf;
  }
}

void write_cell_csv(const CellTraceData& d, const std::string& out_dir) {
  std::ofstream trace(out_dir + "/trace.csv");
  trace << "time,x,calcium,up_enabled\n";
  char buf[160];
  for (size_t i = 0; i < d.t_s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f,%d\n", d.t_s[i], d.x[i],
                  d.calcium[i], int(d.up_enabled[i]));
    trace << buf;
  }
  std::ofstream pulses(out_dir + "/pulses.txt");
  for (double t : d.pulse_times_s) {
    std::snprintf(buf, sizeof buf, "%.9f 0\n", t);
    pulses << buf;
  }
}

}  // namespace

void run_figure(const std::string& name, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  char buf[200];
  if (name == "stp-facilitating" || name == "stp-depressing") {
    write_stp_csv(run_stp_figure(name.substr(4)), out_dir);
  } else if (name == "recovery") {
    const std::vector<RecoveryFigureData> figs = run_recovery_figure(40.0);
    std::ofstream csv(out_dir + "/recovery.csv");
    csv << "tau_setting,probe_time,gain\n";
    std::ofstream fits(out_dir + "/recovery_fits.csv");
    fits << "tau_setting,fitted_tau\n";
    for (const RecoveryFigureData& f : figs) {
      for (size_t i = 0; i < f.probe_times_s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f\n", f.tau_setting_s,
                      f.probe_times_s[i], f.probe_gain[i]);
        csv << buf;
      }
      std::snprintf(buf, sizeof buf, "%.9f,%.9f\n", f.tau_setting_s,
                    f.fitted_tau_s.value_or(0.0));
      fits << buf;
    }
  } else if (name == "tau-sweep") {
    const std::vector<TauSweepPoint> points = sweep_temperature(
        {10.0, 20.0, 30.0, 40.0, 50.0}, {0.3, 0.6, 0.0}, TauProtocol{});
    std::ofstream csv(out_dir + "/tau_sweep.csv");
    csv << "temperature_c,tau_setting,tau_mean,tau_std\n";
    for (const TauSweepPoint& p : points) {
      std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f,%.9f\n", p.temperature_c,
                    p.tau_setting_s, p.tau_mean_s, p.tau_std_s);
      csv << buf;
    }
  } else if (name == "forced-transition") {
    write_cell_csv(run_forced_transition_figure(), out_dir);
  } else if (name == "stop-learning") {
    write_cell_csv(run_stop_learning_figure(), out_dir);
  } else {
    throw std::invalid_argument("figure: unknown name '" + name + "'");
  }
}

}  // namespace scnm
