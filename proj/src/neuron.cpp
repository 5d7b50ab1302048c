// SPDX-License-Identifier: Apache-2.0

#include "scnm/neuron.hpp"

#include <cmath>
#include <stdexcept>

namespace scnm {

void validate(const NeuronParams& p) {
  if (!(p.tau_mem_s > 0.0))
    throw std::invalid_argument("neuron: tau_mem_s must be > 0");
  if (!(p.v_thresh_spike > p.v_reset))
    throw std::invalid_argument("neuron: threshold must exceed reset");
  if (!(p.refractory_s >= 0.0))
    throw std::invalid_argument("neuron: refractory_s must be >= 0");
  if (std::isnan(p.theta_v))
    throw std::invalid_argument("neuron: theta_v is NaN");
}

bool neuron_decay(NeuronState& s, const NeuronParams& p, double dt_s,
                  double now_s) {
  if (now_s < s.refractory_until_s) {
    s.v_mem = p.v_reset;
    return true;
  }
  s.v_mem = p.v_reset + (s.v_mem - p.v_reset) * std::exp(-dt_s / p.tau_mem_s);
  return false;
}

bool neuron_deliver(NeuronState& s, const NeuronParams& p, double charge,
                    double now_s) {
  if (now_s < s.refractory_until_s) return false;
  s.v_mem += charge;
  if (s.v_mem < p.v_reset) s.v_mem = p.v_reset;
  if (s.v_mem >= p.v_thresh_spike) {
    s.v_mem = p.v_reset;
    s.refractory_until_s = now_s + p.refractory_s;
    return true;
  }
  return false;
}

bool integrate(NeuronState& s, const NeuronParams& p, double charge,
               double dt_s, double now_s) {
  if (neuron_decay(s, p, dt_s, now_s)) return false;
  return neuron_deliver(s, p, charge, now_s);
}

}  // namespace scnm
