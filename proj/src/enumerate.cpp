#include "decnet/enumerate.hpp"

#include <algorithm>
#include <cmath>

#include "decnet/evaluate.hpp"

namespace decnet {

EnumStrategy enum_fixed(std::map<ElementId, Value> fixed) {
  auto shared = std::make_shared<std::map<ElementId, Value>>(std::move(fixed));
  return [shared](const ElementNode& node, const Value&) -> EnumChoice {
    auto it = shared->find(node.id);
    if (it == shared->end())
      fail(ErrorKind::MissingDecision,
           "no decision supplied for element " + std::to_string(node.id));
    return {{1.0, it->second}};
  };
}

EnumStrategy enum_uniform() {
  return [](const ElementNode& node, const Value&) {
    const auto& range = node.decision().range;
    EnumChoice out;
    out.reserve(range.size());
    for (const Value& v : range) out.emplace_back(1.0 / static_cast<double>(range.size()), v);
    return out;
  };
}

namespace {

[[noreturn]] void not_enumerable(const ElementNode& node, const char* why) {
  fail(ErrorKind::NotEnumerable,
       "element " + std::to_string(node.id) +
           (node.label.empty() ? "" : " (" + node.label + ")") + " is not enumerable: " + why);
}

using Distribution = std::vector<std::pair<double, Value>>;

void merge_into(Distribution& dist, double p, const Value& v) {
  if (p <= 0.0) return;
  for (auto& [q, u] : dist) {
    if (u == v) {
      q += p;
      return;
    }
  }
  dist.emplace_back(p, v);
}

Distribution enumerate_root_distribution(const Model& fragment, ElementId root,
                                         const EnumStrategy& strategy);

// Local outcome distribution of one element given fixed parent values.
Distribution support_of(const ElementNode& node, const std::vector<Value>& values,
                        const EnumStrategy& strategy) {
  if (const auto* k = std::get_if<ConstantKind>(&node.kind)) return {{1.0, k->value}};
  if (const auto* k = std::get_if<FlipKind>(&node.kind)) {
    Distribution d;
    merge_into(d, k->p, Value::boolean(true));
    merge_into(d, 1.0 - k->p, Value::boolean(false));
    return d;
  }
  if (const auto* k = std::get_if<SelectKind>(&node.kind)) {
    Distribution d;
    for (const auto& [p, v] : k->options) merge_into(d, p, v);
    return d;
  }
  if (const auto* k = std::get_if<ApplyKind>(&node.kind)) {
    std::vector<Value> args;
    args.reserve(k->parents.size());
    for (ElementId p : k->parents) args.push_back(values[p]);
    return {{1.0, k->fn(args)}};
  }
  if (const auto* k = std::get_if<ChainKind>(&node.kind)) {
    ChainOutcome outcome = k->fn(values[k->parent]);
    if (outcome.existing) return {{1.0, values[*outcome.existing]}};
    if (!outcome.fragment)
      fail(ErrorKind::EvalFailure,
           "chain at element " + std::to_string(node.id) + " returned neither ref nor fragment");
    return enumerate_root_distribution(*outcome.fragment, outcome.fragment_root, strategy);
  }
  if (const auto* k = std::get_if<DecisionKind>(&node.kind)) {
    Distribution d;
    for (const auto& [p, v] : strategy(node, values[k->parent])) {
      if (std::find(k->range.begin(), k->range.end(), v) == k->range.end())
        fail(ErrorKind::DecisionOutOfRange,
             "decision value " + v.repr() + " outside the declared range of element " +
                 std::to_string(node.id));
      merge_into(d, p, v);
    }
    return d;
  }
  if (std::holds_alternative<GeometricKind>(node.kind))
    not_enumerable(node, "unbounded integer support");
  not_enumerable(node, "continuous support");
}

struct Enumerator {
  const Model& model;
  const EnumStrategy& strategy;
  std::vector<Value> values;
  std::vector<EnumeratedWorld> out;

  void walk(std::size_t index, double prob) {
    if (prob <= 0.0) return;
    if (index == model.size()) {
      out.push_back(EnumeratedWorld{values, prob});
      return;
    }
    const ElementNode& node = model.elements()[index];
    std::optional<Value> obs = model.observed(node.id);
    Distribution dist = support_of(node, values, strategy);
    if (obs) {
      double p_obs = 0.0;
      for (const auto& [p, v] : dist)
        if (v == *obs) p_obs += p;
      values[index] = *obs;
      walk(index + 1, prob * p_obs);
      return;
    }
    for (const auto& [p, v] : dist) {
      values[index] = v;
      walk(index + 1, prob * p);
    }
  }
};

Distribution enumerate_root_distribution(const Model& fragment, ElementId root,
                                         const EnumStrategy& strategy) {
  if (!fragment.evidence().empty())
    fail(ErrorKind::UnsupportedEvidence, "chain fragments may not carry evidence");
  Enumerator e{fragment, strategy, std::vector<Value>(fragment.size()), {}};
  e.walk(0, 1.0);
  Distribution d;
  for (const EnumeratedWorld& w : e.out) merge_into(d, w.probability, w.values[root]);
  return d;
}

}  // namespace

std::vector<EnumeratedWorld> exact_enumerate(const Model& model, const EnumStrategy& strategy) {
  Enumerator e{model, strategy, std::vector<Value>(model.size()), {}};
  e.walk(0, 1.0);
  double total = 0.0;
  for (const EnumeratedWorld& w : e.out) total += w.probability;
  if (!(total > 0.0))
    fail(ErrorKind::DegenerateEvidence, "evidence has probability zero under enumeration");
  for (EnumeratedWorld& w : e.out) w.probability /= total;
  return e.out;
}

std::vector<EnumeratedWorld> exact_enumerate(const Model& model) {
  EnumStrategy none = [](const ElementNode& node, const Value&) -> EnumChoice {
    fail(ErrorKind::MissingDecision,
         "exact_enumerate: decision element " + std::to_string(node.id) +
             " has no assigned value");
  };
  return exact_enumerate(model, none);
}

double world_utility(const Model& model, const std::vector<Value>& values) {
  double u = 0.0;
  for (ElementId id : model.utilities()) u += values[id].as_real();
  return u;
}

double expected_utility_oracle(const Model& model, ElementId decision_id, const Value& t,
                               const Value& v) {
  if (const auto* hook = model.utility_hook(decision_id)) return (*hook)(t, v);
  const ElementNode& dec = model.node(decision_id);
  if (!dec.is_decision())
    fail(ErrorKind::InvalidParameter,
         "element " + std::to_string(decision_id) + " is not a decision");
  Model clamped = model.with_element_clamped(dec.decision().parent, t);
  try {
    auto worlds = exact_enumerate(clamped, enum_fixed({{decision_id, v}}));
    double eu = 0.0;
    for (const EnumeratedWorld& w : worlds) eu += w.probability * world_utility(clamped, w.values);
    return eu;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotEnumerable)
      fail(ErrorKind::OracleUnavailable,
           std::string("no exact oracle for this model: ") + e.what());
    throw;
  }
}

}  // namespace decnet
