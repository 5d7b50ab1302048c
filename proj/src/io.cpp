// SPDX-License-Identifier: Apache-2.0

#include "scnm/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace scnm {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("config: " + what);
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known)
      fail("unknown key '" + (ctx.empty() ? it.key() : ctx + "." + it.key()) +
           "'");
  }
}

double num(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx + " must be a number");
  return j.get<double>();
}

bool boolean(const json& j, const std::string& ctx) {
  if (!j.is_boolean()) fail(ctx + " must be a boolean");
  return j.get<bool>();
}

void get(const json& obj, const char* key, const std::string& ctx, double* out) {
  if (obj.contains(key)) *out = num(obj[key], ctx + "." + key);
}

void parse_leak(const json& j, LeakModel* leak) {
  check_keys(j, "leak", {"enabled", "r_ref_ohm", "temp_ref_c", "doubling_c"});
  if (j.contains("enabled")) leak->enabled = boolean(j["enabled"], "leak.enabled");
  get(j, "r_ref_ohm", "leak", &leak->r_ref_ohm);
  get(j, "temp_ref_c", "leak", &leak->temp_ref_c);
  get(j, "doubling_c", "leak", &leak->doubling_c);
}

void parse_stp(const json& j, StpParams* stp) {
  check_keys(j, "stp",
             {"utilization", "alpha", "tau_facil_s", "tau_depr_s", "tau_psc_s",
              "amplitude"});
  get(j, "utilization", "stp", &stp->utilization);
  get(j, "alpha", "stp", &stp->alpha);
  get(j, "tau_facil_s", "stp", &stp->tau_facil_s);
  get(j, "tau_depr_s", "stp", &stp->tau_depr_s);
  get(j, "tau_psc_s", "stp", &stp->tau_psc_s);
  get(j, "amplitude", "stp", &stp->amplitude);
}

void parse_dac(const json& j, DacSettings* dac) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    try {
      set_dac_value(*dac, it.key(), num(it.value(), "dac." + it.key()));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
}

void parse_neuron(const json& j, NeuronParams* n) {
  check_keys(j, "neuron",
             {"tau_mem_s", "v_thresh_spike", "v_reset", "refractory_s"});
  get(j, "tau_mem_s", "neuron", &n->tau_mem_s);
  get(j, "v_thresh_spike", "neuron", &n->v_thresh_spike);
  get(j, "v_reset", "neuron", &n->v_reset);
  get(j, "refractory_s", "neuron", &n->refractory_s);
}

void parse_calcium(const json& j, CalciumConfig* c) {
  check_keys(j, "calcium",
             {"tau_s", "quantum", "up_low", "up_high", "down_low", "down_high"});
  get(j, "tau_s", "calcium", &c->tau_s);
  get(j, "quantum", "calcium", &c->quantum);
  get(j, "up_low", "calcium", &c->up_low);
  get(j, "up_high", "calcium", &c->up_high);
  get(j, "down_low", "calcium", &c->down_low);
  get(j, "down_high", "calcium", &c->down_high);
}

void parse_driver(const json& j, RowDriver* d) {
  check_keys(j, "driver", {"c_refr_f", "c_hebb_f", "c_syn_f", "residual_offset"});
  get(j, "c_refr_f", "driver", &d->c_refr_f);
  get(j, "c_hebb_f", "driver", &d->c_hebb_f);
  get(j, "c_syn_f", "driver", &d->c_syn_f);
  get(j, "residual_offset", "driver", &d->residual_offset);
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: " + path + ": " + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  check_keys(j, "",
             {"clock_hz", "speedup", "temperature_c", "seed", "mismatch_sigma",
              "max_update_events", "theta_x", "leak", "stp", "dac", "neuron",
              "calcium", "driver", "duration_s", "weights", "inputs",
              "inputs_file", "record"});

  ExperimentConfig cfg;
  get(j, "clock_hz", "", &cfg.chip.clock_hz);
  get(j, "speedup", "", &cfg.chip.speedup);
  get(j, "temperature_c", "", &cfg.chip.temperature_c);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed must be a non-negative integer");
    cfg.chip.seed = j["seed"].get<uint64_t>();
  }
  get(j, "mismatch_sigma", "", &cfg.chip.mismatch_sigma);
  if (j.contains("max_update_events")) {
    if (!j["max_update_events"].is_number_integer())
      fail("max_update_events must be an integer");
    cfg.chip.max_update_events = j["max_update_events"].get<int>();
  }
  get(j, "theta_x", "", &cfg.chip.theta_x);
  if (j.contains("leak")) parse_leak(j["leak"], &cfg.chip.leak);
  if (j.contains("stp")) parse_stp(j["stp"], &cfg.chip.stp);
  if (j.contains("dac")) parse_dac(j["dac"], &cfg.chip.dac);
  if (j.contains("neuron")) parse_neuron(j["neuron"], &cfg.chip.neuron);
  if (j.contains("calcium")) parse_calcium(j["calcium"], &cfg.chip.calcium);
  if (j.contains("driver")) parse_driver(j["driver"], &cfg.chip.driver);
  get(j, "duration_s", "", &cfg.duration_s);
  if (j.contains("weights")) {
    if (!j["weights"].is_string()) fail("weights must be a file path");
    cfg.weights_path = j["weights"].get<std::string>();
  }
  if (j.contains("inputs") && j.contains("inputs_file"))
    fail("give either inputs or inputs_file, not both");
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) fail("inputs must be an array of [t, row]");
    for (const auto& e : j["inputs"]) {
      if (!e.is_array() || e.size() != 2)
        fail("inputs entries must be [t_seconds, row]");
      InputSpike s;
      s.t_s = num(e[0], "inputs[].t");
      if (!e[1].is_number_integer()) fail("inputs[].row must be an integer");
      s.row = e[1].get<int>();
      cfg.inputs.push_back(s);
    }
  }
  if (j.contains("inputs_file")) {
    if (!j["inputs_file"].is_string()) fail("inputs_file must be a file path");
    cfg.inputs = load_spikes(j["inputs_file"].get<std::string>());
  }
  if (j.contains("record")) {
    if (!j["record"].is_array()) fail("record must be an array of strings");
    for (const auto& e : j["record"]) {
      if (!e.is_string()) fail("record entries must be strings");
      cfg.record.push_back(e.get<std::string>());
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------

namespace {

// Trace channel "kind:index" or "kind:row:col".
struct Channel {
  std::string name;
  int kind = 0;  // 0 presyn.u, 1 presyn.r, 2 presyn.psc, 3 cell.x,
                 // 4 neuron.v, 5 calcium
  int a = 0, b = 0;
};

Channel parse_channel(const std::string& spec) {
  Channel ch;
  ch.name = spec;
  std::string kind = spec;
  std::vector<int> idx;
  size_t pos = spec.find(':');
  kind = spec.substr(0, pos);
  while (pos != std::string::npos) {
    const size_t next = spec.find(':', pos + 1);
    const std::string part = spec.substr(pos + 1, next == std::string::npos
                                                      ? std::string::npos
                                                      : next - pos - 1);
    try {
      idx.push_back(std::stoi(part));
    } catch (...) {
      throw std::runtime_error("config: bad trace channel '" + spec + "'");
    }
    pos = next;
  }
  auto need = [&](size_t n) {
    if (idx.size() != n)
      throw std::runtime_error("config: bad trace channel '" + spec + "'");
  };
  if (kind == "presyn.u") { need(1); ch.kind = 0; ch.a = idx[0]; }
  else if (kind == "presyn.r") { need(1); ch.kind = 1; ch.a = idx[0]; }
  else if (kind == "presyn.psc") { need(1); ch.kind = 2; ch.a = idx[0]; }
  else if (kind == "cell.x") { need(2); ch.kind = 3; ch.a = idx[0]; ch.b = idx[1]; }
  else if (kind == "neuron.v") { need(1); ch.kind = 4; ch.a = idx[0]; }
  else if (kind == "calcium") { need(1); ch.kind = 5; ch.a = idx[0]; }
  else throw std::runtime_error("config: unknown trace channel '" + spec + "'");
  return ch;
}

double read_channel(const ChipSim& sim, const Channel& ch) {
  switch (ch.kind) {
    case 0: return sim.presyn_state(ch.a).v_u;
    case 1: return sim.presyn_state(ch.a).v_r;
    case 2: return sim.presyn_state(ch.a).v_psc;
    case 3: return sim.cell_x(ch.a, ch.b);
    case 4: return sim.neuron_state(ch.a).v_mem;
    default: return sim.calcium(ch.a);
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  ChipSim sim(cfg.chip);
  if (!cfg.weights_path.empty()) {
    WeightRam ram;
    if (cfg.weights_path.size() >= 4 &&
        cfg.weights_path.substr(cfg.weights_path.size() - 4) == ".bin")
      ram.load_binary(cfg.weights_path);
    else
      ram.load_text(cfg.weights_path);
    sim.set_weights(ram);
  }
  sim.submit_spikes(cfg.inputs);

  std::vector<Channel> channels;
  for (const std::string& spec : cfg.record)
    channels.push_back(parse_channel(spec));
  for (const Channel& ch : channels) read_channel(sim, ch);  // index check

  const double cycle_wall = sim.cycle_wall_s();
  const int64_t n_cycles =
      static_cast<int64_t>(std::ceil(cfg.duration_s / cycle_wall));

  std::unique_ptr<TraceWriter> trace;
  if (!channels.empty())
    trace = std::make_unique<TraceWriter>(out_dir + "/trace.csv");
  for (int64_t i = 0; i < n_cycles; ++i) {
    sim.run_cycle();
    if (trace) {
      const double t = sim.now_bio_s();
      for (const Channel& ch : channels)
        trace->row(t, ch.name, read_channel(sim, ch));
    }
  }

  {
    std::ofstream amps(out_dir + "/amplitudes.csv");
    amps << "cycle,time,row,amplitude\n";
    char buf[96];
    for (const AmplitudeEvent& e : sim.amplitude_log()) {
      std::snprintf(buf, sizeof buf, "%lld,%.9f,%d,%.9f\n",
                    static_cast<long long>(e.cycle),
                    static_cast<double>(e.cycle) * sim.cycle_bio_s(), e.row,
                    e.amplitude);
      amps << buf;
    }
  }
  save_output_spikes(out_dir + "/output_spikes.txt",
                     sim.drain_output_spikes(), sim.cycle_bio_s());
}

// ---------------------------------------------------------------------------

std::vector<InputSpike> load_spikes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("spikes: cannot open " + path);
  std::vector<InputSpike> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    InputSpike s;
    if (!(ls >> s.t_s)) continue;
    if (!(ls >> s.row))
      throw std::runtime_error("spikes: " + path + ":" +
                               std::to_string(line_no) + ": expected 2 fields");
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("spikes: " + path + ":" +
                               std::to_string(line_no) + ": trailing content");
    out.push_back(s);
  }
  return out;
}

void save_input_spikes(const std::string& path,
                       const std::vector<InputSpike>& spikes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("spikes: cannot write " + path);
  char buf[64];
  for (const InputSpike& s : spikes) {
    std::snprintf(buf, sizeof buf, "%.9f %d\n", s.t_s, s.row);
    out << buf;
  }
}

void save_output_spikes(const std::string& path,
                        const std::vector<OutputSpike>& spikes,
                        double cycle_bio_s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("spikes: cannot write " + path);
  char buf[64];
  for (const OutputSpike& s : spikes) {
    std::snprintf(buf, sizeof buf, "%.9f %d\n",
                  static_cast<double>(s.cycle) * cycle_bio_s, s.neuron);
    out << buf;
  }
}

// ---------------------------------------------------------------------------

struct TraceWriter::Impl {
  std::FILE* f = nullptr;
};

TraceWriter::TraceWriter(const std::string& path) : impl_(new Impl) {
  impl_->f = std::fopen(path.c_str(), "w");
  if (!impl_->f) {
    delete impl_;
    throw std::runtime_error("trace: cannot write " + path);
  }
  std::fputs("time,signal,value\n", impl_->f);
}

TraceWriter::~TraceWriter() {
  if (impl_->f) std::fclose(impl_->f);
  delete impl_;
}

void TraceWriter::row(double time_s, const std::string& signal, double value) {
  std::fprintf(impl_->f, "%.9f,%s,%.9f\n", time_s, signal.c_str(), value);
}

}  // namespace scnm
