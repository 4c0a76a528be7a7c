#pragma once

#include <map>
#include <vector>

#include "decnet/element.hpp"

namespace decnet {

struct EnumeratedWorld {
  std::vector<Value> values;  // indexed by element id
  double probability = 0.0;
};

// How enumeration resolves a Decision element: a (probability, value) list.
// A deterministic rule returns a single entry with probability 1; uniform
// exploration returns the whole range at 1/|range| each.
using EnumChoice = std::vector<std::pair<double, Value>>;
using EnumStrategy = std::function<EnumChoice(const ElementNode& decision, const Value& parent)>;

EnumStrategy enum_fixed(std::map<ElementId, Value> fixed);
EnumStrategy enum_uniform();

// Exhaustive enumeration of a finite-support model. Probabilities are
// renormalized by the evidence mass and sum to 1 within 1e-9. Elements with
// continuous or unbounded support raise NotEnumerable naming the element.
std::vector<EnumeratedWorld> exact_enumerate(const Model& model, const EnumStrategy& strategy);
std::vector<EnumeratedWorld> exact_enumerate(const Model& model);

// Exact E[sum of utilities | parent = t, decision = v]. Prefers a registered
// closed-form hook; otherwise clamps the decision's parent to t and
// enumerates. Raises OracleUnavailable when neither route applies.
double expected_utility_oracle(const Model& model, ElementId decision_id, const Value& t,
                               const Value& v);

// Total utility of one enumerated assignment.
double world_utility(const Model& model, const std::vector<Value>& values);

}  // namespace decnet
