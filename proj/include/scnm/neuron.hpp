// SPDX-License-Identifier: Apache-2.0
//
// Leaky integrate-and-fire column neuron. Membrane decays continuously,
// integrates signed PSC charge delivered at its column slot, fires on
// threshold crossing and resets; it also exports the "elevated" comparison
// that steers the hebbian branch of the synapse cells in its column. The
// update is split in two so the elevated flag can be read after the decay
// but before the charge lands.

#pragma once

namespace scnm {

struct NeuronParams {
  double tau_mem_s = 0.02;
  double v_thresh_spike = 1.0;   // firing threshold
  double theta_v = 0.25;         // hebbian up/down membrane threshold
  double v_reset = 0.0;
  double refractory_s = 0.001;
};

void validate(const NeuronParams& p);

struct NeuronState {
  double v_mem = 0.0;
  double refractory_until_s = 0.0;
};

// Membrane above the hebbian threshold (strict).
inline bool membrane_elevated(const NeuronState& s, const NeuronParams& p) {
  return s.v_mem > p.theta_v;
}

// Decays the membrane over dt_s (a refractory neuron is pinned at v_reset
// instead). Returns true while refractory at time now_s.
bool neuron_decay(NeuronState& s, const NeuronParams& p, double dt_s,
                  double now_s);

// Adds charge (ignored while refractory), clamps below at v_reset, fires
// when the threshold is reached; firing resets the membrane and starts the
// refractory window. Returns true on a spike.
bool neuron_deliver(NeuronState& s, const NeuronParams& p, double charge,
                    double now_s);

// Full step: decay over dt_s ending at now_s, then deliver charge.
bool integrate(NeuronState& s, const NeuronParams& p, double charge,
               double dt_s, double now_s);

}  // namespace scnm
