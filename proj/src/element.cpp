#include "decnet/element.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace decnet {

ChainOutcome ChainOutcome::fresh(Model fragment, ElementId root) {
  if (root >= fragment.size())
    fail(ErrorKind::UnknownParent, "chain fragment root out of range");
  ChainOutcome out;
  out.fragment = std::make_shared<const Model>(std::move(fragment));
  out.fragment_root = root;
  return out;
}

std::vector<ElementId> ElementNode::parent_ids() const {
  std::vector<ElementId> out;
  if (const auto* a = std::get_if<ApplyKind>(&kind)) {
    out = a->parents;
  } else if (const auto* c = std::get_if<ChainKind>(&kind)) {
    out.push_back(c->parent);
    out.insert(out.end(), c->refs.begin(), c->refs.end());
  } else if (const auto* d = std::get_if<DecisionKind>(&kind)) {
    out.push_back(d->parent);
  }
  return out;
}

const ElementNode& Model::node(ElementId id) const {
  if (id >= elements_.size())
    fail(ErrorKind::UnknownParent, "no element with id " + std::to_string(id));
  return elements_[id];
}

bool Model::is_utility(ElementId id) const {
  return std::find(utilities_.begin(), utilities_.end(), id) != utilities_.end();
}

std::optional<Value> Model::observed(ElementId id) const {
  auto it = evidence_.find(id);
  if (it == evidence_.end()) return std::nullopt;
  return it->second;
}

bool Model::reachable(ElementId from, ElementId to) const {
  if (from == to) return true;
  std::vector<bool> seen(elements_.size(), false);
  std::vector<ElementId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    ElementId cur = stack.back();
    stack.pop_back();
    for (ElementId ch : children_[cur]) {
      if (ch == to) return true;
      if (!seen[ch]) {
        seen[ch] = true;
        stack.push_back(ch);
      }
    }
  }
  return false;
}

std::vector<ElementId> Model::descendants(ElementId id) const {
  std::vector<bool> seen(elements_.size(), false);
  std::vector<ElementId> stack{id};
  std::vector<ElementId> out;
  while (!stack.empty()) {
    ElementId cur = stack.back();
    stack.pop_back();
    for (ElementId ch : children_[cur]) {
      if (!seen[ch]) {
        seen[ch] = true;
        stack.push_back(ch);
        out.push_back(ch);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Model Model::with_element_clamped(ElementId id, const Value& value) const {
  const ElementNode& n = node(id);
  if (n.is_decision())
    fail(ErrorKind::InvalidParameter, "cannot clamp a decision element; fix it through a strategy");
  Model copy = *this;
  copy.elements_[id].kind = ConstantKind{value};
  return copy;
}

void Model::set_utility_hook(ElementId decision, UtilityHook hook) {
  (*hooks_)[decision] = std::move(hook);
}

const Model::UtilityHook* Model::utility_hook(ElementId decision) const {
  auto it = hooks_->find(decision);
  return it == hooks_->end() ? nullptr : &it->second;
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorKind::InvalidParameter, std::string(what) + ": probability must lie in [0,1]");
}

}  // namespace

void validate_kind(const Kind& kind, std::size_t next_id) {
  auto check_ref = [&](ElementId id, const char* what) {
    if (id >= next_id)
      fail(ErrorKind::UnknownParent,
           std::string(what) + ": unknown parent element " + std::to_string(id));
  };
  if (const auto* f = std::get_if<FlipKind>(&kind)) {
    check_probability(f->p, "Flip");
  } else if (const auto* u = std::get_if<UniformKind>(&kind)) {
    if (!(u->lo < u->hi))
      fail(ErrorKind::InvalidParameter, "Uniform: lo must be strictly below hi");
    if (!std::isfinite(u->lo) || !std::isfinite(u->hi))
      fail(ErrorKind::InvalidParameter, "Uniform: bounds must be finite");
  } else if (const auto* n = std::get_if<NormalKind>(&kind)) {
    if (!(n->variance > 0.0) || !std::isfinite(n->variance) || !std::isfinite(n->location))
      fail(ErrorKind::InvalidParameter, "Normal: variance must be positive and finite");
  } else if (const auto* g = std::get_if<GammaKind>(&kind)) {
    if (!(g->shape > 0.0) || !std::isfinite(g->shape))
      fail(ErrorKind::InvalidParameter, "Gamma: shape must be positive");
  } else if (const auto* ge = std::get_if<GeometricKind>(&kind)) {
    check_probability(ge->continue_p, "Geometric");
  } else if (const auto* s = std::get_if<SelectKind>(&kind)) {
    if (s->options.empty()) fail(ErrorKind::InvalidParameter, "Select: no options");
    double total = 0.0;
    for (const auto& [p, v] : s->options) {
      if (!(p >= 0.0)) fail(ErrorKind::InvalidParameter, "Select: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      fail(ErrorKind::InvalidParameter, "Select: probabilities must sum to 1");
  } else if (const auto* a = std::get_if<ApplyKind>(&kind)) {
    if (!a->fn) fail(ErrorKind::InvalidParameter, "Apply: missing function");
    for (ElementId p : a->parents) check_ref(p, "Apply");
  } else if (const auto* c = std::get_if<ChainKind>(&kind)) {
    if (!c->fn) fail(ErrorKind::InvalidParameter, "Chain: missing function");
    check_ref(c->parent, "Chain");
    for (ElementId r : c->refs) check_ref(r, "Chain ref");
  } else if (const auto* d = std::get_if<DecisionKind>(&kind)) {
    check_ref(d->parent, "Decision");
    if (d->range.empty()) fail(ErrorKind::InvalidParameter, "Decision: empty range");
    std::set<Value> seen(d->range.begin(), d->range.end());
    if (seen.size() != d->range.size())
      fail(ErrorKind::InvalidParameter, "Decision: duplicate range values");
  }
}

ElementId ModelBuilder::add(Kind kind, std::string label) {
  validate_kind(kind, elements_.size());
  ElementId id = static_cast<ElementId>(elements_.size());
  elements_.push_back(ElementNode{id, std::move(kind), std::move(label)});
  return id;
}

ElementId ModelBuilder::constant(Value v, std::string label) {
  return add(ConstantKind{std::move(v)}, std::move(label));
}
ElementId ModelBuilder::flip(double p, std::string label) {
  return add(FlipKind{p}, std::move(label));
}
ElementId ModelBuilder::uniform(double lo, double hi, std::string label) {
  return add(UniformKind{lo, hi}, std::move(label));
}
ElementId ModelBuilder::normal(double location, double variance, std::string label) {
  return add(NormalKind{location, variance}, std::move(label));
}
ElementId ModelBuilder::gamma(double shape, std::string label) {
  return add(GammaKind{shape}, std::move(label));
}
ElementId ModelBuilder::geometric(double continue_p, std::string label) {
  return add(GeometricKind{continue_p}, std::move(label));
}
ElementId ModelBuilder::select(std::vector<std::pair<double, Value>> options, std::string label) {
  return add(SelectKind{std::move(options)}, std::move(label));
}
ElementId ModelBuilder::apply(std::vector<ElementId> parents, ApplyFn fn, std::string label) {
  return add(ApplyKind{std::move(parents), std::move(fn)}, std::move(label));
}
ElementId ModelBuilder::chain(ElementId parent, ChainFn fn, std::vector<ElementId> refs,
                              std::string label) {
  return add(ChainKind{parent, std::move(fn), std::move(refs)}, std::move(label));
}
ElementId ModelBuilder::decision(ElementId parent, std::vector<Value> range, std::string label) {
  return add(DecisionKind{parent, std::move(range)}, std::move(label));
}

ElementId ModelBuilder::if_(ElementId cond, ElementId then_id, ElementId else_id,
                            std::string label) {
  return chain(
      cond,
      [then_id, else_id](const Value& c) {
        return ChainOutcome::ref(c.as_boolean() ? then_id : else_id);
      },
      {then_id, else_id}, std::move(label));
}

ElementId ModelBuilder::tuple_of(std::vector<ElementId> parents, std::string label) {
  return apply(
      std::move(parents),
      [](std::span<const Value> vs) {
        return Value::tuple(std::vector<Value>(vs.begin(), vs.end()));
      },
      std::move(label));
}

void ModelBuilder::check_parent(ElementId id, const char* what) const {
  if (id >= elements_.size())
    fail(ErrorKind::UnknownParent, std::string(what) + ": unknown element " + std::to_string(id));
}

void ModelBuilder::designate_utility(ElementId id) {
  check_parent(id, "designate_utility");
  if (std::find(utilities_.begin(), utilities_.end(), id) == utilities_.end())
    utilities_.push_back(id);
}

void ModelBuilder::observe(ElementId id, Value v) {
  check_parent(id, "observe");
  const ElementNode& n = elements_[id];
  if (n.is_decision())
    fail(ErrorKind::UnsupportedEvidence, "evidence on a decision element");
  evidence_.insert_or_assign(id, std::move(v));
}

Model ModelBuilder::build() && {
  Model m;
  m.elements_ = std::move(elements_);
  m.utilities_ = std::move(utilities_);
  m.evidence_ = std::move(evidence_);
  m.children_.assign(m.elements_.size(), {});
  for (const ElementNode& n : m.elements_) {
    if (n.is_decision()) m.decisions_.push_back(n.id);
    for (ElementId p : n.parent_ids()) m.children_[p].push_back(n.id);
  }
  return m;
}

}  // namespace decnet
