#include "decnet/evaluate.hpp"

#include <algorithm>
#include <cmath>

namespace decnet {

DecisionStrategy uniform_exploration() {
  DecisionStrategy s;
  s.choose = [](const ElementNode& node, const Value&, RandomSource& rng) {
    const auto& range = node.decision().range;
    return range[rng.uniform_index(range.size())];
  };
  s.exploratory = [](ElementId) { return true; };
  return s;
}

DecisionStrategy fixed_decisions(std::map<ElementId, Value> fixed) {
  auto shared = std::make_shared<std::map<ElementId, Value>>(std::move(fixed));
  DecisionStrategy s;
  s.choose = [shared](const ElementNode& node, const Value&, RandomSource&) {
    auto it = shared->find(node.id);
    if (it == shared->end())
      fail(ErrorKind::MissingDecision,
           "no decision supplied for element " + std::to_string(node.id));
    return it->second;
  };
  s.exploratory = [](ElementId) { return false; };
  return s;
}

namespace detail {

double uniform_pdf(double x, double lo, double hi) {
  return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
}

double normal_pdf(double x, double location, double variance) {
  const double d = x - location;
  return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * M_PI * variance);
}

double gamma_pdf(double x, double shape) {
  if (!(x > 0.0)) return 0.0;
  return std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
}

double geometric_pmf(std::int64_t k, double continue_p) {
  if (k < 1) return 0.0;
  return (1.0 - continue_p) * std::pow(continue_p, static_cast<double>(k - 1));
}

namespace {

[[noreturn]] void rethrow_fn_failure(const ElementNode& node, const char* what,
                                     const std::exception& e) {
  fail(ErrorKind::EvalFailure, std::string(what) + " function failed at element " +
                                   std::to_string(node.id) +
                                   (node.label.empty() ? "" : " (" + node.label + ")") +
                                   ": " + e.what());
}

struct FragmentResult {
  Value root_value;
  double likelihood = 1.0;
};

// Evaluates a chain fragment. When `forced` is set the fragment root is
// pinned to that value and the returned likelihood carries its local
// probability or density.
FragmentResult eval_fragment(const EvalCore& core, const Model& fragment, ElementId root,
                             const Value* forced, const std::string& path_prefix);

Value eval_node(const EvalCore& core, const ElementNode& node,
                const std::vector<Value>& values, const Value* forced, double& likelihood,
                const std::string& path_prefix) {
  if (const auto* k = std::get_if<ConstantKind>(&node.kind)) {
    if (forced) {
      likelihood *= (*forced == k->value) ? 1.0 : 0.0;
      return *forced;
    }
    return k->value;
  }
  if (const auto* k = std::get_if<FlipKind>(&node.kind)) {
    if (forced) {
      likelihood *= forced->as_boolean() ? k->p : 1.0 - k->p;
      return *forced;
    }
    return Value::boolean(core.rng.bernoulli(k->p));
  }
  if (const auto* k = std::get_if<UniformKind>(&node.kind)) {
    if (forced) {
      likelihood *= uniform_pdf(forced->as_real(), k->lo, k->hi);
      return *forced;
    }
    return Value::real(core.rng.uniform(k->lo, k->hi));
  }
  if (const auto* k = std::get_if<NormalKind>(&node.kind)) {
    if (forced) {
      likelihood *= normal_pdf(forced->as_real(), k->location, k->variance);
      return *forced;
    }
    return Value::real(core.rng.normal(k->location, k->variance));
  }
  if (const auto* k = std::get_if<GammaKind>(&node.kind)) {
    if (forced) {
      likelihood *= gamma_pdf(forced->as_real(), k->shape);
      return *forced;
    }
    return Value::real(core.rng.gamma(k->shape));
  }
  if (const auto* k = std::get_if<GeometricKind>(&node.kind)) {
    if (forced) {
      likelihood *= geometric_pmf(forced->as_integer(), k->continue_p);
      return *forced;
    }
    return Value::integer(core.rng.geometric(k->continue_p));
  }
  if (const auto* k = std::get_if<SelectKind>(&node.kind)) {
    if (forced) {
      double p = 0.0;
      for (const auto& [prob, v] : k->options)
        if (v == *forced) p += prob;
      likelihood *= p;
      return *forced;
    }
    std::vector<double> probs;
    probs.reserve(k->options.size());
    for (const auto& [prob, v] : k->options) probs.push_back(prob);
    return k->options[core.rng.categorical(probs)].second;
  }
  if (const auto* k = std::get_if<ApplyKind>(&node.kind)) {
    std::vector<Value> args;
    args.reserve(k->parents.size());
    for (ElementId p : k->parents) args.push_back(values[p]);
    Value v;
    try {
      v = k->fn(args);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      rethrow_fn_failure(node, "Apply", e);
    }
    if (forced) {
      likelihood *= (v == *forced) ? 1.0 : 0.0;
      return *forced;
    }
    return v;
  }
  if (const auto* k = std::get_if<ChainKind>(&node.kind)) {
    ChainOutcome outcome;
    try {
      outcome = k->fn(values[k->parent]);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      rethrow_fn_failure(node, "Chain", e);
    }
    if (outcome.existing) {
      ElementId ref = *outcome.existing;
      if (std::find(k->refs.begin(), k->refs.end(), ref) == k->refs.end())
        fail(ErrorKind::EvalFailure,
             "chain at element " + std::to_string(node.id) +
                 " returned element " + std::to_string(ref) + " not in its declared refs");
      if (forced) {
        likelihood *= (values[ref] == *forced) ? 1.0 : 0.0;
        return *forced;
      }
      return values[ref];
    }
    if (!outcome.fragment)
      fail(ErrorKind::EvalFailure,
           "chain at element " + std::to_string(node.id) + " returned neither ref nor fragment");
    std::string prefix = path_prefix.empty()
                             ? std::to_string(node.id)
                             : path_prefix + "/" + std::to_string(node.id);
    FragmentResult r = eval_fragment(core, *outcome.fragment, outcome.fragment_root,
                                     forced, prefix);
    likelihood *= r.likelihood;
    return std::move(r.root_value);
  }
  if (const auto* k = std::get_if<DecisionKind>(&node.kind)) {
    Value v = core.strategy.choose(node, values[k->parent], core.rng);
    if (std::find(k->range.begin(), k->range.end(), v) == k->range.end())
      fail(ErrorKind::DecisionOutOfRange,
           "decision value " + v.repr() + " outside the declared range of element " +
               std::to_string(node.id));
    return v;
  }
  fail(ErrorKind::EvalFailure, "unhandled element kind");
}

FragmentResult eval_fragment(const EvalCore& core, const Model& fragment, ElementId root,
                             const Value* forced, const std::string& path_prefix) {
  if (!fragment.evidence().empty())
    fail(ErrorKind::UnsupportedEvidence, "chain fragments may not carry evidence");
  FragmentResult out;
  std::vector<Value> values(fragment.size());
  for (const ElementNode& n : fragment.elements()) {
    if (n.is_decision())
      fail(ErrorKind::EvalFailure, "decision elements may not appear inside chain fragments");
    const Value* force_here = (n.id == root) ? forced : nullptr;
    values[n.id] = eval_node(core, n, values, force_here, out.likelihood, path_prefix);
    if (core.dynamic_sink)
      core.dynamic_sink->emplace_back(path_prefix + "/" + std::to_string(n.id), values[n.id]);
  }
  out.root_value = std::move(values[root]);
  return out;
}

}  // namespace

Value EvalCore::eval(const ElementNode& node, const std::vector<Value>& values,
                     double& likelihood) const {
  std::optional<Value> obs = model.observed(node.id);
  return eval_node(*this, node, values, obs ? &*obs : nullptr, likelihood, {});
}

}  // namespace detail

World evaluate(const Model& model, RandomSource& rng, const DecisionStrategy& strategy) {
  World w;
  w.values.resize(model.size());
  detail::EvalCore core{model, rng, strategy, &w.dynamic};
  for (const ElementNode& n : model.elements())
    w.values[n.id] = core.eval(n, w.values, w.weight);
  return w;
}

World evaluate(const Model& model, RandomSource& rng,
               const std::map<ElementId, Value>& fixed_decisions_by_id) {
  for (ElementId d : model.decisions()) {
    auto it = fixed_decisions_by_id.find(d);
    if (it == fixed_decisions_by_id.end())
      fail(ErrorKind::MissingDecision,
           "no decision supplied for element " + std::to_string(d));
    const auto& range = model.node(d).decision().range;
    if (std::find(range.begin(), range.end(), it->second) == range.end())
      fail(ErrorKind::DecisionOutOfRange,
           "decision value " + it->second.repr() + " outside the declared range of element " +
               std::to_string(d));
  }
  return evaluate(model, rng, fixed_decisions(fixed_decisions_by_id));
}

}  // namespace decnet
