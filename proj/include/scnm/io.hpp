// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration (JSON), spike files, and CSV trace output.

#pragma once

#include <string>
#include <vector>

#include "scnm/system.hpp"

namespace scnm {

struct ExperimentConfig {
  ChipConfig chip;
  double duration_s = 1.0;            // wall-clock run length
  std::string weights_path;           // optional .bin/.txt weight image
  std::vector<InputSpike> inputs;
  // Per-cycle trace channels: "presyn.u:R", "presyn.r:R", "presyn.psc:R",
  // "cell.x:R:C", "neuron.v:C", "calcium:C".
  std::vector<std::string> record;
};

// Parses an experiment JSON file. Unknown keys anywhere are rejected with
// std::runtime_error naming the offending key.
ExperimentConfig load_experiment_config(const std::string& path);

// Runs the experiment and writes amplitudes.csv, output_spikes.txt and
// (if record is non-empty) trace.csv into out_dir (created if needed).
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Spike files: one "t_seconds index" pair per line; '#' starts a comment.
std::vector<InputSpike> load_spikes(const std::string& path);
void save_input_spikes(const std::string& path,
                       const std::vector<InputSpike>& spikes);
// Output spikes are written as "t_seconds neuron" using the chip's
// biological cycle time.
void save_output_spikes(const std::string& path,
                        const std::vector<OutputSpike>& spikes,
                        double cycle_bio_s);

// CSV writer for long-format traces: header "time,signal,value", rows
// printed with 9 fractional digits.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void row(double time_s, const std::string& signal, double value);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace scnm
