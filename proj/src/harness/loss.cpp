#include "decnet/harness/loss.hpp"

#include <cmath>

namespace decnet::harness {

double UtilityOracle::best(const Value& parent) const {
  if (decision_range.empty()) fail(ErrorKind::InvalidSpec, "oracle has an empty decision range");
  double best_eu = -std::numeric_limits<double>::infinity();
  for (const Value& v : decision_range) best_eu = std::max(best_eu, expected_utility(parent, v));
  return best_eu;
}

double UtilityOracle::loss(const Value& parent, const Value& chosen) const {
  return std::abs(best(parent) - expected_utility(parent, chosen));
}

UtilityOracle model_oracle(const Model& model, ElementId decision) {
  UtilityOracle oracle;
  oracle.decision_range = model.node(decision).decision().range;
  oracle.expected_utility = [&model, decision](const Value& t, const Value& v) {
    return expected_utility_oracle(model, decision, t, v);
  };
  return oracle;
}

double compute_loss(const UtilityOracle& oracle, const Policy& policy,
                    std::span<const Value> test_parents) {
  if (test_parents.empty()) fail(ErrorKind::InvalidSpec, "compute_loss: no test parents");
  double total = 0.0;
  for (const Value& t : test_parents) total += oracle.loss(t, policy.decide(t));
  return total / static_cast<double>(test_parents.size());
}

std::vector<std::pair<Value, double>> static_baselines(const UtilityOracle& oracle,
                                                       std::span<const Value> test_parents) {
  if (test_parents.empty()) fail(ErrorKind::InvalidSpec, "static_baselines: no test parents");
  std::vector<std::pair<Value, double>> out;
  out.reserve(oracle.decision_range.size());
  for (const Value& v : oracle.decision_range) {
    double total = 0.0;
    for (const Value& t : test_parents) total += oracle.loss(t, v);
    out.emplace_back(v, total / static_cast<double>(test_parents.size()));
  }
  return out;
}

}  // namespace decnet::harness
