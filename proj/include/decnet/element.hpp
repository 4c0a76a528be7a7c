#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "decnet/value.hpp"

namespace decnet {

using ElementId = std::uint32_t;

class Model;

// What a chain function hands back for one parent value: either a reference
// to an element that already exists in the same model, or a freshly built
// sub-model whose root supplies the chain's value.
struct ChainOutcome {
  std::optional<ElementId> existing;
  std::shared_ptr<const Model> fragment;
  ElementId fragment_root = 0;

  static ChainOutcome ref(ElementId id) {
    ChainOutcome out;
    out.existing = id;
    return out;
  }
  static ChainOutcome fresh(Model fragment, ElementId root);
};

using ApplyFn = std::function<Value(std::span<const Value>)>;
using ChainFn = std::function<ChainOutcome(const Value&)>;

// ---- element kinds -------------------------------------------------------

struct ConstantKind { Value value; };
struct FlipKind { double p; };
struct UniformKind { double lo, hi; };
// variance, not standard deviation
struct NormalKind { double location, variance; };
struct GammaKind { double shape; };  // rate fixed at 1
struct GeometricKind { double continue_p; };  // support {1,2,...}
struct SelectKind { std::vector<std::pair<double, Value>> options; };
struct ApplyKind {
  std::vector<ElementId> parents;
  ApplyFn fn;
};
struct ChainKind {
  ElementId parent;
  ChainFn fn;
  // Every element the function may return as ChainOutcome::ref must be
  // listed here; it pins evaluation order and dependency tracking.
  std::vector<ElementId> refs;
};
struct DecisionKind {
  ElementId parent;
  std::vector<Value> range;  // finite, duplicate-free; order is the tie order
};

using Kind = std::variant<ConstantKind, FlipKind, UniformKind, NormalKind,
                          GammaKind, GeometricKind, SelectKind, ApplyKind,
                          ChainKind, DecisionKind>;

struct ElementNode {
  ElementId id = 0;
  Kind kind;
  std::string label;  // optional, for diagnostics

  bool is_decision() const { return std::holds_alternative<DecisionKind>(kind); }
  const DecisionKind& decision() const { return std::get<DecisionKind>(kind); }
  // Direct dependencies: distribution parents, Apply parents, chain parent
  // plus declared refs, decision parent.
  std::vector<ElementId> parent_ids() const;
};

// Immutable once built. Evaluation, enumeration and sampling never mutate a
// Model, so one instance can serve any number of threads.
class Model {
 public:
  const std::vector<ElementNode>& elements() const { return elements_; }
  const ElementNode& node(ElementId id) const;
  std::size_t size() const { return elements_.size(); }

  const std::vector<ElementId>& utilities() const { return utilities_; }
  const std::map<ElementId, Value>& evidence() const { return evidence_; }
  const std::vector<ElementId>& decisions() const { return decisions_; }

  bool is_utility(ElementId id) const;
  std::optional<Value> observed(ElementId id) const;

  // Children per element, and reachability used by Metropolis moves and
  // decision-sequence validation.
  const std::vector<std::vector<ElementId>>& children() const { return children_; }
  bool reachable(ElementId from, ElementId to) const;
  std::vector<ElementId> descendants(ElementId id) const;  // excludes id

  // Copy with one element replaced by Constant(value). The replaced element
  // must not be a Decision. Used to pin an informational parent.
  Model with_element_clamped(ElementId id, const Value& value) const;

  // Closed-form expected-utility hook, keyed by decision element. Model
  // factories may register one when enumeration cannot apply.
  using UtilityHook = std::function<double(const Value& parent, const Value& decision)>;
  void set_utility_hook(ElementId decision, UtilityHook hook);
  const UtilityHook* utility_hook(ElementId decision) const;

 private:
  friend class ModelBuilder;
  std::vector<ElementNode> elements_;
  std::vector<ElementId> utilities_;
  std::vector<ElementId> decisions_;
  std::map<ElementId, Value> evidence_;
  std::vector<std::vector<ElementId>> children_;
  std::shared_ptr<std::map<ElementId, UtilityHook>> hooks_ =
      std::make_shared<std::map<ElementId, UtilityHook>>();
};

// Append-only construction. Parents must already exist, which makes the
// element list a topological order and rules out cycles by construction.
class ModelBuilder {
 public:
  ElementId add(Kind kind, std::string label = {});

  // Convenience wrappers.
  ElementId constant(Value v, std::string label = {});
  ElementId flip(double p, std::string label = {});
  ElementId uniform(double lo, double hi, std::string label = {});
  ElementId normal(double location, double variance, std::string label = {});
  ElementId gamma(double shape, std::string label = {});
  ElementId geometric(double continue_p, std::string label = {});
  ElementId select(std::vector<std::pair<double, Value>> options, std::string label = {});
  ElementId apply(std::vector<ElementId> parents, ApplyFn fn, std::string label = {});
  ElementId chain(ElementId parent, ChainFn fn, std::vector<ElementId> refs = {},
                  std::string label = {});
  ElementId decision(ElementId parent, std::vector<Value> range, std::string label = {});

  // if_(c, a, b): value of a when c is true, else value of b.
  ElementId if_(ElementId cond, ElementId then_id, ElementId else_id, std::string label = {});

  // Joins parent values into a tuple value.
  ElementId tuple_of(std::vector<ElementId> parents, std::string label = {});

  void designate_utility(ElementId id);
  void observe(ElementId id, Value v);

  std::size_t size() const { return elements_.size(); }

  Model build() &&;

 private:
  void check_parent(ElementId id, const char* what) const;
  std::vector<ElementNode> elements_;
  std::vector<ElementId> utilities_;
  std::map<ElementId, Value> evidence_;
};

void validate_kind(const Kind& kind, std::size_t next_id);

}  // namespace decnet
