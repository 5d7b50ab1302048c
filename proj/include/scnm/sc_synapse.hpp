// SPDX-License-Identifier: Apache-2.0
//
// Switched-capacitor long-term synapse cell: an analog variable x stored
// differentially, moved by counted charge pulses (refresh drift every matrix
// cycle, hebbian jump on a pre-spike) and read out as a binary weight select.
// The cell circuit is shared per row; per-cell capacitor mismatch scales the
// step sizes. Plus the 4+4+1-bit weight RAM the readout selects from.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scnm/sc_presyn.hpp"  // LeakModel

namespace scnm {

// ---------------------------------------------------------------------------
// Row driver: shared step generators for one row of cells

struct RowDriver {
  double c_refr_f = 2.2e-15;  // refresh charge-pulse capacitor
  double c_hebb_f = 2.2e-15;  // hebbian charge-pulse capacitor
  double c_syn_f = 22e-15;    // storage capacitor
  double v_alpha = 0.255;     // refresh up-rail (drift-up target)
  double v_beta = 0.255;      // refresh down-rail
  double v_a = 0.95;          // hebbian up-rail
  double v_b = 0.95;          // hebbian down-rail
  double v_cm = 0.25;         // common mode subtracted from rails
  double residual_offset = 0.0;  // comparator offset in x units

  // Per-nominal-cell step sizes in x units (rail minus common mode, scaled
  // by the pulse/storage capacitance ratio).
  double drift_step_up() const { return (v_alpha - v_cm) * c_refr_f / c_syn_f; }
  double drift_step_down() const { return (v_beta - v_cm) * c_refr_f / c_syn_f; }
  double jump_step_up() const { return (v_a - v_cm) * c_hebb_f / c_syn_f; }
  double jump_step_down() const { return (v_b - v_cm) * c_hebb_f / c_syn_f; }
};

void validate(const RowDriver& d);

struct SynapseCell {
  double x = 0.0;          // in [0, 1]
  double step_scale = 1.0; // nominal-over-actual storage capacitance
};

enum class ForceMode { kNone, kUp, kDown };

// One matrix cycle's worth of cell dynamics at a pre-spike or refresh slot:
// comparator evaluates x + residual_offset > theta_x first, then the refresh
// pulse moves x toward the comparator's rail, then (if pre_spike) the
// hebbian pulse jumps x up or down per the membrane branch, gated by
// up/down_enabled. force overrides the membrane branch only. x clamps to
// [0, 1] after each pulse. Returns the comparator value it acted on.
bool process_synapse(SynapseCell& cell, const RowDriver& d, double theta_x,
                     bool pre_spike, bool v_mem_elevated, bool up_enabled,
                     bool down_enabled, ForceMode force);

// Junction leak on the differential pair collapses x toward 0.5. factor is
// the per-node exp(-dt/RC) retention.
inline void leak_cell(SynapseCell& cell, double factor) {
  cell.x = 0.5 + (cell.x - 0.5) * factor;
}

// ---------------------------------------------------------------------------
// Weight RAM

struct WeightEntry {
  uint8_t ltp = 0;        // 4-bit weight selected when x is high
  uint8_t ltd = 0;        // 4-bit weight selected when x is low
  bool inhibitory = false;
};

inline int select_weight(bool comparator_high, const WeightEntry& e) {
  int w = comparator_high ? e.ltp : e.ltd;
  return e.inhibitory ? -w : w;
}

class WeightRam {
 public:
  static constexpr int kRows = 128;
  static constexpr int kCols = 64;

  WeightRam() : entries_(kRows * kCols) {}

  WeightEntry& at(int row, int col) { return entries_[index(row, col)]; }
  const WeightEntry& at(int row, int col) const {
    return entries_[index(row, col)];
  }

  // Binary image: kRows*kCols little-endian uint16 entries in row-major
  // order; bits 0-3 ltp, 4-7 ltd, 8 inhibitory, 9-15 must be zero.
  // Throws std::runtime_error on size or reserved-bit violations.
  void load_binary(const std::string& path);
  void save_binary(const std::string& path) const;

  // Text image: one "ltp ltd inh" line per entry in row-major order,
  // '#' starts a comment. Throws std::runtime_error on malformed input.
  void load_text(const std::string& path);
  void save_text(const std::string& path) const;

 private:
  static int index(int row, int col);
  std::vector<WeightEntry> entries_;
};

}  // namespace scnm
