// SPDX-License-Identifier: Apache-2.0

#include "scnm/sc_synapse.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace scnm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

void validate(const RowDriver& d) {
  require(d.c_refr_f > 0.0 && d.c_hebb_f > 0.0 && d.c_syn_f > 0.0,
          "driver: capacitances must be > 0");
  require(d.v_alpha >= 0.0 && d.v_alpha <= 1.0 && d.v_beta >= 0.0 &&
              d.v_beta <= 1.0 && d.v_a >= 0.0 && d.v_a <= 1.0 &&
              d.v_b >= 0.0 && d.v_b <= 1.0 && d.v_cm >= 0.0 && d.v_cm <= 1.0,
          "driver: rail voltages must be in [0, 1]");
  require(d.v_alpha >= d.v_cm && d.v_beta >= d.v_cm && d.v_a >= d.v_cm &&
              d.v_b >= d.v_cm,
          "driver: rails must not be below the common mode");
  require(d.residual_offset > -1.0 && d.residual_offset < 1.0,
          "driver: residual offset out of range");
}

bool process_synapse(SynapseCell& cell, const RowDriver& d, double theta_x,
                     bool pre_spike, bool v_mem_elevated, bool up_enabled,
                     bool down_enabled, ForceMode force) {
  const bool comp = cell.x + d.residual_offset > theta_x;
  // Refresh pulse toward the comparator's rail.
  if (comp)
    cell.x = clamp01(cell.x + d.drift_step_up() * cell.step_scale);
  else
    cell.x = clamp01(cell.x - d.drift_step_down() * cell.step_scale);
  if (pre_spike) {
    const bool up_branch =
        force == ForceMode::kNone ? v_mem_elevated : force == ForceMode::kUp;
    if (up_branch) {
      if (up_enabled)
        cell.x = clamp01(cell.x + d.jump_step_up() * cell.step_scale);
    } else {
      if (down_enabled)
        cell.x = clamp01(cell.x - d.jump_step_down() * cell.step_scale);
    }
  }
  return comp;
}

// ---------------------------------------------------------------------------

int WeightRam::index(int row, int col) {
  if (row < 0 || row >= kRows || col < 0 || col >= kCols)
    throw std::out_of_range("weight ram: cell index out of range");
  return row * kCols + col;
}

namespace {

uint16_t pack(const WeightEntry& e) {
  return static_cast<uint16_t>((e.ltp & 0xF) | ((e.ltd & 0xF) << 4) |
                               (e.inhibitory ? 0x100 : 0));
}

WeightEntry unpack(uint16_t v, size_t at) {
  if (v & 0xFE00)
    throw std::runtime_error("weight ram: reserved bits set in entry " +
                             std::to_string(at));
  WeightEntry e;
  e.ltp = static_cast<uint8_t>(v & 0xF);
  e.ltd = static_cast<uint8_t>((v >> 4) & 0xF);
  e.inhibitory = (v & 0x100) != 0;
  return e;
}

}  // namespace

void WeightRam::load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("weight ram: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const size_t expected = size_t{kRows} * kCols * 2;
  if (data.size() != expected)
    throw std::runtime_error("weight ram: " + path + " has " +
                             std::to_string(data.size()) + " bytes, expected " +
                             std::to_string(expected));
  for (size_t i = 0; i < entries_.size(); ++i) {
    const uint16_t v = static_cast<uint8_t>(data[2 * i]) |
                       (static_cast<uint16_t>(static_cast<uint8_t>(
                            data[2 * i + 1]))
                        << 8);
    entries_[i] = unpack(v, i);
  }
}

void WeightRam::save_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("weight ram: cannot write " + path);
  for (const WeightEntry& e : entries_) {
    const uint16_t v = pack(e);
    out.put(static_cast<char>(v & 0xFF));
    out.put(static_cast<char>(v >> 8));
  }
}

void WeightRam::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("weight ram: cannot open " + path);
  std::string line;
  size_t at = 0;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int ltp = 0, ltd = 0, inh = 0;
    if (!(ls >> ltp)) continue;  // blank or comment-only line
    if (!(ls >> ltd >> inh))
      throw std::runtime_error("weight ram: " + path + ":" +
                               std::to_string(line_no) + ": expected 3 fields");
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("weight ram: " + path + ":" +
                               std::to_string(line_no) + ": trailing content");
    if (ltp < 0 || ltp > 15 || ltd < 0 || ltd > 15 || (inh != 0 && inh != 1))
      throw std::runtime_error("weight ram: " + path + ":" +
                               std::to_string(line_no) + ": value out of range");
    if (at >= entries_.size())
      throw std::runtime_error("weight ram: " + path + ": too many entries");
    entries_[at++] = WeightEntry{static_cast<uint8_t>(ltp),
                                 static_cast<uint8_t>(ltd), inh == 1};
  }
  if (at != entries_.size())
    throw std::runtime_error("weight ram: " + path + ": expected " +
                             std::to_string(entries_.size()) +
                             " entries, got " + std::to_string(at));
}

void WeightRam::save_text(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("weight ram: cannot write " + path);
  out << "# ltp ltd inhibitory, row-major\n";
  for (const WeightEntry& e : entries_)
    out << int(e.ltp) << ' ' << int(e.ltd) << ' ' << (e.inhibitory ? 1 : 0)
        << '\n';
}

}  // namespace scnm
