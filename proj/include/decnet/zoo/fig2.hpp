#pragma once

#include "decnet/element.hpp"

namespace decnet::zoo {

// Continuous-parent network: pa ~ Uniform(lo, hi), proc ~ Gamma(shape = pa,
// rate 1), a binary decision observing pa, and util = sin(proc) when the
// decision is 1, cos(proc) otherwise.
struct Fig2Config {
  double lo = 0.0;
  double hi = 5.0;
};

struct Fig2Model {
  Model model;
  ElementId pa = 0;
  ElementId proc = 0;
  ElementId dec = 0;
  ElementId util = 0;
  Fig2Config config;
};

Fig2Model fig2_network(const Fig2Config& config = {});

// Closed-form E[util | pa = t, decision = v] for rate-1 Gamma:
//   E[cos(proc)] = 2^(-t/2) * cos(t*pi/4),  E[sin(proc)] = 2^(-t/2) * sin(t*pi/4).
// Registered on the model as the decision's utility hook.
double fig2_expected_utility(double t, int v);

}  // namespace decnet::zoo
