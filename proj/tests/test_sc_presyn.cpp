// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "scnm/model_core.hpp"
#include "scnm/sc_presyn.hpp"

using namespace scnm;

namespace {

ScPresynConfig leakless_config() {
  ScPresynConfig cfg;
  cfg.leak.enabled = false;
  return cfg;
}

}  // namespace

TEST_CASE("decay ratio of the default capacitor pair is exactly 15/16") {
  ScPresynConfig cfg;
  CHECK(cfg.decay_ratio() == 0.9375);
}

TEST_CASE("period_for_tau frozen values at the 3.3 MHz clock") {
  const double clk = 3.3e6;
  const double rho = 0.9375;
  CHECK(period_for_tau(0.010, clk, rho) == 2130);
  CHECK(period_for_tau(0.013, clk, rho) == 2769);
  CHECK(period_for_tau(0.035, clk, rho) == 7454);
  CHECK(period_for_tau(0.100, clk, rho) == 21298);
  CHECK(period_for_tau(0.300, clk, rho) == 63893);
  CHECK(period_for_tau(0.490, clk, rho) == 104359);
  CHECK(period_for_tau(0.600, clk, rho) == 127786);
  CHECK(period_for_tau(0.0, clk, rho) == 0);
  CHECK(period_for_tau(-1.0, clk, rho) == 0);
  // Sub-tick time constants clamp to the minimum period of one tick.
  CHECK(period_for_tau(1e-9, clk, rho) == 1);
}

TEST_CASE("quantize_step_count frozen values and clamping") {
  const double rho = 0.9375;
  CHECK(quantize_step_count(0.29, rho, 120) == 5);
  CHECK(quantize_step_count(0.50, rho, 120) == 11);
  CHECK(quantize_step_count(0.96, rho, 120) == 50);
  CHECK(quantize_step_count(1.0, rho, 120) == 120);
  CHECK(quantize_step_count(0.9999, rho, 120) == 120);  // would be 143
  CHECK(quantize_step_count(0.001, rho, 120) == 1);     // rounds to 0, min 1
  CHECK(quantize_step_count(0.0, rho, 120) == 0);
  CHECK_THROWS_AS(quantize_step_count(1.5, rho, 120), std::invalid_argument);
}

TEST_CASE("achieved_fraction frozen values") {
  const double rho = 0.9375;
  CHECK(achieved_fraction(5, rho) ==
        doctest::Approx(0.2758035659790039).epsilon(1e-14));
  CHECK(achieved_fraction(11, rho) ==
        doctest::Approx(0.5083183046418185).epsilon(1e-14));
  CHECK(achieved_fraction(50, rho) ==
        doctest::Approx(0.9603207166267522).epsilon(1e-14));
}

TEST_CASE("quantize_stp_params maps defaults to frozen counts and periods") {
  StpParams req;  // U=0.29, alpha=0.5, taus 0.3/0.3/0.01
  ScPresynConfig templ;
  QuantizedStp q = quantize_stp_params(req, templ, 120);
  CHECK(q.update_events_u == 5);
  CHECK(q.update_events_r == 11);
  CHECK(q.decay_period_u == 63893);
  CHECK(q.decay_period_r == 63893);
  CHECK(q.decay_period_psc == 2130);
  CHECK(q.achieved_utilization ==
        doctest::Approx(0.2758035659790039).epsilon(1e-14));
  CHECK(q.achieved_alpha ==
        doctest::Approx(0.5083183046418185).epsilon(1e-14));
  CHECK(q.achieved_tau_facil_s ==
        doctest::Approx(0.2999993617802907).epsilon(1e-12));
  CHECK(q.achieved_tau_depr_s ==
        doctest::Approx(0.2999993617802907).epsilon(1e-12));
  CHECK(q.achieved_tau_psc_s ==
        doctest::Approx(0.010001074305354563).epsilon(1e-12));

  // Disabled decay maps to period 0 and achieved tau 0.
  req.tau_depr_s = 0.0;
  q = quantize_stp_params(req, templ, 120);
  CHECK(q.decay_period_r == 0);
  CHECK(q.achieved_tau_depr_s == 0.0);
}

TEST_CASE("decay chain realizes exact geometric decay at event boundaries") {
  ScPresynConfig cfg = leakless_config();
  cfg.decay_period_u = 63893;
  cfg.decay_period_r = 63893;
  cfg.decay_period_psc = 63893;
  ScPresynState s = presyn_init(cfg, 0);
  s.v_u = s.v_r = s.v_psc = 0.77;
  const double rho = cfg.decay_ratio();
  for (int k = 1; k <= 50; ++k) {
    presyn_tick(s, cfg, k * cfg.decay_period_u);
    const double expect = 0.77 * std::pow(rho, k);
    CHECK(s.v_u == doctest::Approx(expect).epsilon(1e-12));
    CHECK(s.v_r == doctest::Approx(expect).epsilon(1e-12));
    CHECK(s.v_psc == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("decay events fire on the free-running absolute grid") {
  ScPresynConfig cfg = leakless_config();
  cfg.decay_period_u = 1000;

  ScPresynState s = presyn_init(cfg, 0);
  CHECK(s.next_decay_u == 1000);
  CHECK(s.next_decay_r == kNever);

  s = presyn_init(cfg, 1000);
  CHECK(s.next_decay_u == 2000);  // strictly after start

  s = presyn_init(cfg, 1003);
  CHECK(s.next_decay_u == 2000);

  // Tick across several grid points fires each exactly once.
  s = presyn_init(cfg, 250);
  s.v_u = 1.0;
  presyn_tick(s, cfg, 3250);
  CHECK(s.v_u == doctest::Approx(std::pow(0.9375, 3)).epsilon(1e-12));
  CHECK(s.next_decay_u == 4000);
}

TEST_CASE("independent periods fire independently") {
  ScPresynConfig cfg = leakless_config();
  cfg.decay_period_u = 100;
  cfg.decay_period_r = 300;
  ScPresynState s = presyn_init(cfg, 0);
  s.v_u = 1.0;
  s.v_r = 1.0;
  s.v_psc = 1.0;
  presyn_tick(s, cfg, 300);
  CHECK(s.v_u == doctest::Approx(std::pow(0.9375, 3)).epsilon(1e-12));
  CHECK(s.v_r == doctest::Approx(0.9375).epsilon(1e-12));
  CHECK(s.v_psc == 1.0);  // disabled chain never decays
}

TEST_CASE("presyn_tick rejects going backwards") {
  ScPresynConfig cfg = leakless_config();
  ScPresynState s = presyn_init(cfg, 100);
  CHECK_THROWS_AS(presyn_tick(s, cfg, 99), std::invalid_argument);
}

TEST_CASE("spike updates follow counted charge-share pulses exactly") {
  ScPresynConfig cfg = leakless_config();
  cfg.update_events_u = 5;
  cfg.update_events_r = 11;
  const double rho = cfg.decay_ratio();

  // From the zero state, the first spike charges v_u to 1 - rho^5; the
  // pre-depression transfer samples exactly that.
  cfg.transfer = PscTransfer::kBeforeDeprUpdate;
  ScPresynState s = presyn_init(cfg, 0);
  const double amp1 = presyn_on_spike(s, cfg, 10);
  const double u1 = 1.0 - std::pow(rho, 5);
  CHECK(amp1 == doctest::Approx(u1).epsilon(1e-14));
  CHECK(s.v_u == doctest::Approx(u1).epsilon(1e-14));
  CHECK(s.v_psc == amp1);
  // r pulses then drag v_r toward the updated v_u by 1 - rho^11.
  CHECK(s.v_r == doctest::Approx(u1 * (1.0 - std::pow(rho, 11))).epsilon(1e-14));

  // The post-depression transfer on the same history samples the residual
  // difference, scaled by rho^11 relative to the pre-depression sample.
  cfg.transfer = PscTransfer::kAfterDeprUpdate;
  ScPresynState s2 = presyn_init(cfg, 0);
  const double amp1b = presyn_on_spike(s2, cfg, 10);
  CHECK(amp1b == doctest::Approx(u1 * std::pow(rho, 11)).epsilon(1e-14));
  CHECK(s2.v_u == doctest::Approx(s.v_u).epsilon(1e-15));
  CHECK(s2.v_r == doctest::Approx(s.v_r).epsilon(1e-15));
}

TEST_CASE("psc transfer replaces the trace rather than accumulating") {
  ScPresynConfig cfg = leakless_config();
  cfg.transfer = PscTransfer::kBeforeDeprUpdate;
  ScPresynState s = presyn_init(cfg, 0);
  presyn_on_spike(s, cfg, 10);
  const double amp2 = presyn_on_spike(s, cfg, 20);
  CHECK(s.v_psc == amp2);
}

TEST_CASE("post-depression amplitudes are (1 - achieved alpha) times the "
          "pre-depression ones on any train") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int64_t> gap(100, 400000);

  ScPresynConfig base = leakless_config();
  base.decay_period_u = 63893;
  base.decay_period_r = 63893;
  base.decay_period_psc = 2130;

  std::vector<int64_t> spikes;
  int64_t t = 500;
  for (int i = 0; i < 60; ++i) {
    spikes.push_back(t);
    t += gap(rng);
  }

  ScPresynConfig before = base;
  before.transfer = PscTransfer::kBeforeDeprUpdate;
  ScPresynConfig after = base;
  after.transfer = PscTransfer::kAfterDeprUpdate;
  ScPresynState sb = presyn_init(before, 0);
  ScPresynState sa = presyn_init(after, 0);
  const double keep = std::pow(base.decay_ratio(), base.update_events_r);
  for (int64_t clk : spikes) {
    const double ab = presyn_on_spike(sb, before, clk);
    const double aa = presyn_on_spike(sa, after, clk);
    CHECK(aa == doctest::Approx(ab * keep).epsilon(1e-12));
  }
}

TEST_CASE("amplitudes match the iterative model exactly on grid-aligned "
          "trains") {
  // Inter-spike intervals that are exact multiples of every decay period
  // eliminate phase quantization: the channel must reproduce the iterative
  // model with its achieved parameters at floating-point precision.
  ScPresynConfig cfg = leakless_config();
  cfg.decay_period_u = 16500;
  cfg.decay_period_r = 33000;
  cfg.decay_period_psc = 2130;
  cfg.update_events_u = 5;
  cfg.update_events_r = 11;
  cfg.transfer = PscTransfer::kBeforeDeprUpdate;
  const double rho = cfg.decay_ratio();
  const double log_rho = -std::log(rho);

  StpParams ach;
  ach.utilization = achieved_fraction(5, rho);
  ach.alpha = achieved_fraction(11, rho);
  ach.tau_facil_s = 16500.0 / (cfg.clock_hz * log_rho);
  ach.tau_depr_s = 33000.0 / (cfg.clock_hz * log_rho);
  ach.tau_psc_s = 0.01;
  ach.amplitude = 1.0;

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int64_t> mult(1, 12);
  std::vector<int64_t> clks;
  std::vector<double> times_s;
  int64_t t = 777;  // absolute phase does not matter, only the intervals
  for (int i = 0; i < 40; ++i) {
    clks.push_back(t);
    times_s.push_back(static_cast<double>(t) / cfg.clock_hz);
    t += 33000 * mult(rng);
  }

  StpTrace ideal = stp_trace(times_s, ach);
  ScPresynState s = presyn_init(cfg, 0);
  for (std::size_t i = 0; i < clks.size(); ++i) {
    const double amp = presyn_on_spike(s, cfg, clks[i]);
    CHECK(amp == doctest::Approx(ideal.amplitudes[i]).epsilon(1e-12));
  }
}

TEST_CASE("leak halves resistance every 10 C and composes with speedup") {
  LeakModel leak;  // 50 TOhm at 30 C
  CHECK(leak.resistance_ohm(40.0) == doctest::Approx(25e12).epsilon(1e-14));
  CHECK(leak.resistance_ohm(20.0) == doctest::Approx(100e12).epsilon(1e-14));
  CHECK(leak.tau_s(30.0, 75e-15) == doctest::Approx(3.75).epsilon(1e-14));
  CHECK(leak.tau_s(40.0, 75e-15) == doctest::Approx(1.875).epsilon(1e-14));
  CHECK(leak.tau_s(25.0, 75e-15) ==
        doctest::Approx(5.303300858899106).epsilon(1e-12));

  LeakModel off;
  off.enabled = false;
  CHECK(off.factor(1.0, 40.0, 75e-15) == 1.0);

  // Leak acts on wall-clock time: the same clock-tick gap at 100x speedup
  // spans 1/100 the wall time, so the channel drains 100x less.
  ScPresynConfig slow;
  slow.decay_period_u = 0;
  ScPresynConfig fast = slow;
  fast.speedup = 100.0;
  ScPresynState a = presyn_init(slow, 0);
  ScPresynState b = presyn_init(fast, 0);
  a.v_u = b.v_u = 1.0;
  const int64_t gap = 3300000;  // one wall second at speedup 1
  presyn_tick(a, slow, gap);
  presyn_tick(b, fast, gap);
  const double tau25 = slow.leak.tau_s(25.0, slow.c_state_f);
  CHECK(a.v_u == doctest::Approx(std::exp(-1.0 / tau25)).epsilon(1e-12));
  CHECK(b.v_u == doctest::Approx(std::exp(-0.01 / tau25)).epsilon(1e-12));
}

TEST_CASE("configuration validation rejects nonphysical settings") {
  ScPresynConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  ScPresynConfig bad = cfg;
  bad.c_state_f = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = cfg;
  bad.decay_period_u = -1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = cfg;
  bad.v_a = 1.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = cfg;
  bad.speedup = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = cfg;
  bad.clock_hz = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
