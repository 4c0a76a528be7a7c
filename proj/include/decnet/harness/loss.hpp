#pragma once

#include <span>

#include "decnet/policy.hpp"

namespace decnet::harness {

// Reference expected utilities for one decision: E[U | parent, decision]
// over a fixed decision range.
struct UtilityOracle {
  std::vector<Value> decision_range;
  std::function<double(const Value& parent, const Value& decision)> expected_utility;

  double best(const Value& parent) const;
  // |max_v E[U|t,v] - E[U|t,chosen]|
  double loss(const Value& parent, const Value& chosen) const;
};

// Oracle backed by the model's registered closed-form hook, or by exact
// enumeration when no hook exists.
UtilityOracle model_oracle(const Model& model, ElementId decision);

// Mean utility loss of the policy's choices over the test parents.
double compute_loss(const UtilityOracle& oracle, const Policy& policy,
                    std::span<const Value> test_parents);

// Mean loss of each constant policy, one entry per decision value in range
// order.
std::vector<std::pair<Value, double>> static_baselines(const UtilityOracle& oracle,
                                                       std::span<const Value> test_parents);

}  // namespace decnet::harness
