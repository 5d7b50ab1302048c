// SPDX-License-Identifier: Apache-2.0
//
// Deterministic normal generator: Box-Muller over mt19937_64. Implemented by
// hand because std::normal_distribution output differs across standard
// library implementations; this sequence is identical everywhere.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scnm {

class NormalRng {
 public:
  explicit NormalRng(uint64_t seed) : engine_(seed) {}

  // Standard normal deviate.
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    have_spare_ = true;
    return mag * std::cos(two_pi * u2);
  }

  // 1 + sigma*N(0,1), clamped to [0.5, 2.0].
  double mismatch_factor(double sigma) {
    double f = 1.0 + sigma * next();
    if (f < 0.5) f = 0.5;
    if (f > 2.0) f = 2.0;
    return f;
  }

 private:
  double uniform() {
    // 53-bit mantissa uniform in [0, 1).
    return (engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace scnm
