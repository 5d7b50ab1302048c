// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "scnm/sc_synapse.hpp"

using namespace scnm;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("row driver step sizes from default rails") {
  RowDriver d;
  // (0.255 - 0.25) * 2.2f / 22f = 5e-4 per cycle.
  CHECK(d.drift_step_up() == doctest::Approx(5e-4).epsilon(1e-9));
  CHECK(d.drift_step_down() == doctest::Approx(5e-4).epsilon(1e-9));
  // (0.95 - 0.25) * 2.2f / 22f = 0.07 per pre-spike.
  CHECK(d.jump_step_up() == doctest::Approx(0.07).epsilon(1e-9));
  CHECK(d.jump_step_down() == doctest::Approx(0.07).epsilon(1e-9));
  CHECK_NOTHROW(validate(d));
  RowDriver bad = d;
  bad.c_syn_f = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("refresh pulse drifts toward the comparator rail") {
  RowDriver d;
  SynapseCell cell;

  cell.x = 0.6;
  bool comp = process_synapse(cell, d, 0.5, false, false, true, true,
                              ForceMode::kNone);
  CHECK(comp);
  CHECK(cell.x == doctest::Approx(0.6 + 5e-4).epsilon(1e-12));

  cell.x = 0.4;
  comp = process_synapse(cell, d, 0.5, false, false, true, true,
                         ForceMode::kNone);
  CHECK_FALSE(comp);
  CHECK(cell.x == doctest::Approx(0.4 - 5e-4).epsilon(1e-12));

  // Exactly at threshold the comparator reads low: refresh pushes down.
  cell.x = 0.5;
  comp = process_synapse(cell, d, 0.5, false, false, true, true,
                         ForceMode::kNone);
  CHECK_FALSE(comp);
  CHECK(cell.x < 0.5);
}

TEST_CASE("comparator offset shifts the effective threshold") {
  RowDriver d;
  d.residual_offset = 0.02;
  SynapseCell cell;
  cell.x = 0.49;  // 0.49 + 0.02 > 0.5
  CHECK(process_synapse(cell, d, 0.5, false, false, true, true,
                        ForceMode::kNone));
}

TEST_CASE("hebbian jump applies after the refresh pulse and is gated") {
  RowDriver d;
  SynapseCell cell;

  // Elevated membrane: refresh down (x below threshold), then jump up.
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, true, true, true, true, ForceMode::kNone);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4 + 0.07).epsilon(1e-12));

  // Low membrane: jump down.
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, true, false, true, true, ForceMode::kNone);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4 - 0.07).epsilon(1e-12));

  // Stop-learning gates suppress the branch they control.
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, true, true, false, true, ForceMode::kNone);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4).epsilon(1e-12));
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, true, false, true, false, ForceMode::kNone);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4).epsilon(1e-12));

  // No pre-spike: no hebbian pulse regardless of membrane state.
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, false, true, true, true, ForceMode::kNone);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4).epsilon(1e-12));
}

TEST_CASE("force mode overrides the membrane branch but not the gates") {
  RowDriver d;
  SynapseCell cell;

  cell.x = 0.3;
  process_synapse(cell, d, 0.5, true, false, true, true, ForceMode::kUp);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4 + 0.07).epsilon(1e-12));

  cell.x = 0.7;
  process_synapse(cell, d, 0.5, true, true, true, true, ForceMode::kDown);
  CHECK(cell.x == doctest::Approx(0.7 + 5e-4 - 0.07).epsilon(1e-12));

  // A disabled gate still blocks the forced jump.
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, true, false, false, true, ForceMode::kUp);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4).epsilon(1e-12));

  // Force only acts on pre-spikes.
  cell.x = 0.3;
  process_synapse(cell, d, 0.5, false, false, true, true, ForceMode::kUp);
  CHECK(cell.x == doctest::Approx(0.3 - 5e-4).epsilon(1e-12));
}

TEST_CASE("cell state clamps to [0, 1] and scales with capacitor mismatch") {
  RowDriver d;
  SynapseCell cell;

  cell.x = 0.99;
  process_synapse(cell, d, 0.5, true, true, true, true, ForceMode::kNone);
  CHECK(cell.x == 1.0);

  cell.x = 0.01;
  process_synapse(cell, d, 0.5, true, false, true, true, ForceMode::kNone);
  CHECK(cell.x == 0.0);

  cell.x = 0.3;
  cell.step_scale = 1.5;
  process_synapse(cell, d, 0.5, true, true, true, true, ForceMode::kNone);
  CHECK(cell.x == doctest::Approx(0.3 + 1.5 * (0.07 - 5e-4)).epsilon(1e-12));
}

TEST_CASE("leak collapses the differential pair toward the midpoint") {
  SynapseCell cell;
  cell.x = 0.9;
  leak_cell(cell, 0.5);
  CHECK(cell.x == doctest::Approx(0.7).epsilon(1e-12));
  cell.x = 0.1;
  leak_cell(cell, 0.5);
  CHECK(cell.x == doctest::Approx(0.3).epsilon(1e-12));
  leak_cell(cell, 1.0);
  CHECK(cell.x == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("weight select reads ltp when high, ltd when low, negated if "
          "inhibitory") {
  WeightEntry e;
  e.ltp = 8;
  e.ltd = 3;
  CHECK(select_weight(true, e) == 8);
  CHECK(select_weight(false, e) == 3);
  e.inhibitory = true;
  CHECK(select_weight(true, e) == -8);
  CHECK(select_weight(false, e) == -3);
}

TEST_CASE("weight ram binary image round-trips and validates") {
  WeightRam ram;
  ram.at(0, 0) = WeightEntry{15, 7, true};
  ram.at(1, 2) = WeightEntry{3, 12, false};
  ram.at(127, 63) = WeightEntry{1, 1, true};

  const std::string path = temp_path("scnm_test_weights.bin");
  ram.save_binary(path);

  // Exactly 128*64 little-endian uint16 entries.
  CHECK(std::filesystem::file_size(path) == 128 * 64 * 2);

  WeightRam loaded;
  loaded.load_binary(path);
  CHECK(loaded.at(0, 0).ltp == 15);
  CHECK(loaded.at(0, 0).ltd == 7);
  CHECK(loaded.at(0, 0).inhibitory);
  CHECK(loaded.at(1, 2).ltp == 3);
  CHECK(loaded.at(1, 2).ltd == 12);
  CHECK_FALSE(loaded.at(1, 2).inhibitory);
  CHECK(loaded.at(127, 63).inhibitory);

  // Row-major layout: patch entry (1, 2) directly in the file.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp((1 * 64 + 2) * 2);
    const unsigned char bytes[2] = {0x5A, 0x01};  // ltp=10 ltd=5 inhibitory
    f.write(reinterpret_cast<const char*>(bytes), 2);
  }
  loaded.load_binary(path);
  CHECK(loaded.at(1, 2).ltp == 10);
  CHECK(loaded.at(1, 2).ltd == 5);
  CHECK(loaded.at(1, 2).inhibitory);

  // Reserved bits must be zero.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    const unsigned char bytes[2] = {0x00, 0x02};  // bit 9 set
    f.write(reinterpret_cast<const char*>(bytes), 2);
  }
  CHECK_THROWS_AS(loaded.load_binary(path), std::runtime_error);

  // Truncated image is rejected.
  std::filesystem::resize_file(path, 128 * 64 * 2 - 2);
  CHECK_THROWS_AS(loaded.load_binary(path), std::runtime_error);

  std::filesystem::remove(path);
}

TEST_CASE("weight ram text image round-trips and rejects malformed input") {
  WeightRam ram;
  ram.at(5, 5) = WeightEntry{9, 2, true};
  const std::string path = temp_path("scnm_test_weights.txt");
  ram.save_text(path);

  WeightRam loaded;
  loaded.load_text(path);
  CHECK(loaded.at(5, 5).ltp == 9);
  CHECK(loaded.at(5, 5).ltd == 2);
  CHECK(loaded.at(5, 5).inhibitory);
  CHECK(loaded.at(0, 1).ltp == 0);

  // Comments and blank lines are allowed.
  {
    std::ofstream f(path);
    f << "# header comment\n";
    for (int i = 0; i < 128 * 64; ++i) f << "1 2 0\n";
  }
  CHECK_NOTHROW(loaded.load_text(path));
  CHECK(loaded.at(64, 32).ltp == 1);

  // Out-of-range nibble.
  {
    std::ofstream f(path);
    f << "16 0 0\n";
    for (int i = 1; i < 128 * 64; ++i) f << "0 0 0\n";
  }
  CHECK_THROWS_AS(loaded.load_text(path), std::runtime_error);

  // Too few entries.
  {
    std::ofstream f(path);
    for (int i = 0; i < 100; ++i) f << "0 0 0\n";
  }
  CHECK_THROWS_AS(loaded.load_text(path), std::runtime_error);

  std::filesystem::remove(path);
}
