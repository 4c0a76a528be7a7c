#pragma once

#include <map>
#include <string>
#include <vector>

#include "decnet/element.hpp"
#include "decnet/random.hpp"

namespace decnet {

// One complete assignment. `values` is indexed by element id; `dynamic`
// holds the values of elements created inside chain fragments, keyed by a
// path such as "3/0" (fragment element 0 under chain 3). The weight is the
// likelihood of the evidence under this assignment, 1 when there is none.
struct World {
  std::vector<Value> values;
  std::vector<std::pair<std::string, Value>> dynamic;
  double weight = 1.0;

  const Value& value_of(ElementId id) const { return values.at(id); }
};

// Supplies a value for each Decision element as a world is generated.
// `exploratory` tells the Metropolis sampler whether the choice consumes
// randomness and therefore belongs in the proposal set.
struct DecisionStrategy {
  std::function<Value(const ElementNode& decision, const Value& parent, RandomSource&)> choose;
  std::function<bool(ElementId)> exploratory;
};

// Draws uniformly from each decision's declared range.
DecisionStrategy uniform_exploration();

// Plays back a fixed assignment; errors on a decision it does not cover.
DecisionStrategy fixed_decisions(std::map<ElementId, Value> fixed);

// Single forward pass in element order. Atomic elements draw from `rng`,
// evidence elements are forced and their likelihood multiplies the weight.
World evaluate(const Model& model, RandomSource& rng,
               const std::map<ElementId, Value>& fixed_decisions_by_id);
World evaluate(const Model& model, RandomSource& rng, const DecisionStrategy& strategy);

namespace detail {

// Shared element-evaluation core. Samplers re-run it per element when they
// need to resample a subset of a world.
struct EvalCore {
  const Model& model;
  RandomSource& rng;
  const DecisionStrategy& strategy;
  std::vector<std::pair<std::string, Value>>* dynamic_sink = nullptr;

  // Evaluates `node` given already-assigned parent values, honoring any
  // evidence on it. Multiplies `likelihood` by the evidence likelihood.
  Value eval(const ElementNode& node, const std::vector<Value>& values,
             double& likelihood) const;
};

double uniform_pdf(double x, double lo, double hi);
double normal_pdf(double x, double location, double variance);
double gamma_pdf(double x, double shape);
double geometric_pmf(std::int64_t k, double continue_p);

}  // namespace detail

}  // namespace decnet
