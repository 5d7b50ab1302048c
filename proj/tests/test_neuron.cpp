// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "scnm/neuron.hpp"

using namespace scnm;

TEST_CASE("membrane decays exponentially toward the reset level") {
  NeuronParams p;
  p.tau_mem_s = 0.02;
  p.v_reset = 0.1;
  NeuronState s;
  s.v_mem = 0.9;
  const bool refr = neuron_decay(s, p, 0.01, 1.0);
  CHECK_FALSE(refr);
  CHECK(s.v_mem ==
        doctest::Approx(0.1 + 0.8 * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("subthreshold charges accumulate; negative charge clamps at reset") {
  NeuronParams p;  // threshold 1.0, reset 0.0
  NeuronState s;
  CHECK_FALSE(neuron_deliver(s, p, 0.3, 0.0));
  CHECK_FALSE(neuron_deliver(s, p, 0.4, 0.0));
  CHECK(s.v_mem == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_FALSE(neuron_deliver(s, p, -5.0, 0.0));
  CHECK(s.v_mem == p.v_reset);
}

TEST_CASE("firing resets the membrane and discards the overshoot") {
  NeuronParams p;
  p.refractory_s = 0.0;
  NeuronState s;
  s.v_mem = 0.8;
  // 0.8 + 0.7 crosses threshold 1.0; the excess 0.5 is thrown away by the
  // hard reset, not carried into the next integration window.
  CHECK(neuron_deliver(s, p, 0.7, 0.0));
  CHECK(s.v_mem == p.v_reset);

  // Reaching the threshold exactly fires too.
  s.v_mem = 0.0;
  CHECK(neuron_deliver(s, p, 1.0, 0.0));
  CHECK(s.v_mem == p.v_reset);
}

TEST_CASE("refractory window pins the membrane and swallows charge") {
  NeuronParams p;  // refractory 1 ms
  NeuronState s;
  s.v_mem = 0.5;
  CHECK(neuron_deliver(s, p, 0.5, 2.0));  // fires at t = 2.0
  CHECK(s.refractory_until_s == doctest::Approx(2.001).epsilon(1e-12));

  // Charge during the window is dropped entirely.
  CHECK_FALSE(neuron_deliver(s, p, 0.9, 2.0005));
  CHECK(s.v_mem == p.v_reset);

  // Decay during the window reports refractory and pins at reset.
  s.v_mem = 0.3;  // would not happen physically; proves the pinning
  CHECK(neuron_decay(s, p, 0.0001, 2.0006));
  CHECK(s.v_mem == p.v_reset);

  // After the window ends the neuron integrates again.
  CHECK_FALSE(neuron_deliver(s, p, 0.9, 2.002));
  CHECK(s.v_mem == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("zero refractory never blocks delivery") {
  NeuronParams p;
  p.refractory_s = 0.0;
  NeuronState s;
  CHECK(neuron_deliver(s, p, 1.5, 3.0));
  // refractory_until == now blocks nothing (strict comparison).
  CHECK(neuron_deliver(s, p, 1.5, 3.0));
}

TEST_CASE("integrate composes decay then delivery") {
  NeuronParams p;
  p.refractory_s = 0.0;
  NeuronState s;
  s.v_mem = 0.5;
  integrate(s, p, 0.2, 0.02, 1.0);
  CHECK(s.v_mem ==
        doctest::Approx(0.5 * std::exp(-1.0) + 0.2).epsilon(1e-12));
}

TEST_CASE("elevated flag is a strict comparison against theta_v") {
  NeuronParams p;  // theta_v = 0.25
  NeuronState s;
  s.v_mem = 0.25;
  CHECK_FALSE(membrane_elevated(s, p));
  s.v_mem = 0.250001;
  CHECK(membrane_elevated(s, p));
}

TEST_CASE("neuron parameter validation") {
  NeuronParams p;
  CHECK_NOTHROW(validate(p));
  NeuronParams bad = p;
  bad.tau_mem_s = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.v_thresh_spike = bad.v_reset;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.refractory_s = -0.001;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
