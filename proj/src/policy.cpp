#include "decnet/policy.hpp"

#include <algorithm>
#include <cmath>

namespace decnet {

ExactPolicy ExactPolicy::compile(const SampleStore& store) {
  if (store.samples().empty()) fail(ErrorKind::EmptyStore, "cannot compile an empty store");
  struct Cell {
    double uw = 0.0;
    double w = 0.0;
  };
  struct Row {
    Value parent;
    std::vector<Cell> by_decision;
  };
  const std::size_t arity = store.decision_range().size();
  std::map<std::string, Row> rows;
  for (const Sample& s : store.samples()) {
    std::string key = s.parent.repr();
    auto [it, fresh] = rows.try_emplace(std::move(key));
    if (fresh) {
      it->second.parent = s.parent;
      it->second.by_decision.resize(arity);
    }
    Cell& cell = it->second.by_decision[store.range_index_of(s.decision)];
    cell.uw += s.utility * s.weight;
    cell.w += s.weight;
  }

  ExactPolicy policy;
  for (auto& [key, row] : rows) {
    std::optional<std::size_t> best;
    double best_mean = 0.0;
    for (std::size_t vi = 0; vi < arity; ++vi) {
      const Cell& cell = row.by_decision[vi];
      if (!(cell.w > 0.0)) continue;  // unseen decision values stay out of the argmax
      double mean = cell.uw / cell.w;
      if (!best || mean > best_mean) {
        best = vi;
        best_mean = mean;
      }
    }
    if (best) policy.choice_.emplace(key, store.decision_range()[*best]);
  }
  if (policy.choice_.empty())
    fail(ErrorKind::EmptyStore, "store has no parent value with positive weight");
  return policy;
}

Value ExactPolicy::decide(const Value& parent) const {
  auto it = choice_.find(parent.repr());
  if (it == choice_.end())
    fail(ErrorKind::UnknownParentValue,
         "no policy entry for parent value " + parent.repr());
  return it->second;
}

namespace {

std::vector<IndexedItem> partition_items(const SampleStore& store, std::size_t range_index) {
  std::vector<IndexedItem> items;
  const auto& idxs = store.partition(range_index);
  items.reserve(idxs.size());
  std::uint32_t ordinal = 0;
  for (std::uint32_t i : idxs) {
    const Sample& s = store.samples()[i];
    items.push_back(IndexedItem{s.parent, s.decision, s.utility, s.weight, ordinal++});
  }
  return items;
}

struct KnnAggregate {
  double uw = 0.0;
  double w = 0.0;
  bool clamped = false;
};

KnnAggregate knn_aggregate(const MetricIndex& index, const Value& t, int k) {
  KnnAggregate agg;
  agg.clamped = static_cast<std::size_t>(k) > index.size();
  for (const QueryHit& hit : index.query_knn(t, k)) {
    agg.uw += hit.item->utility * hit.item->weight;
    agg.w += hit.item->weight;
  }
  return agg;
}

}  // namespace

double knn_expected_utility(const SampleStore& store, const Value& v, const Value& t, int k,
                            const MetricIndex& index_for_v, std::uint64_t* clamp_events) {
  if (k < 1) fail(ErrorKind::InvalidParameter, "knn_expected_utility: k must be at least 1");
  if (index_for_v.size() == 0)
    fail(ErrorKind::EmptyStore,
         "no samples for decision value " + v.repr() + " (empty partition)");
  (void)store.range_index_of(v);
  KnnAggregate agg = knn_aggregate(index_for_v, t, k);
  if (agg.clamped && clamp_events) ++*clamp_events;
  if (!(agg.w > 0.0))
    fail(ErrorKind::InvalidParameter,
         "knn_expected_utility: selected neighbors carry zero total weight");
  return agg.uw / agg.w;
}

ApproxPolicy::ApproxPolicy(std::shared_ptr<const SampleStore> store, DistanceFunction distance,
                           ApproxPolicyConfig config)
    : store_(std::move(store)), distance_(std::move(distance)), config_(config) {
  if (!store_ || !store_->sealed())
    fail(ErrorKind::InvalidParameter, "approximate policy needs a sealed store");
  if (config_.k < 1) fail(ErrorKind::InvalidParameter, "approximate policy: k must be >= 1");
  const std::size_t arity = store_->decision_range().size();
  index_by_decision_.reserve(arity);
  for (std::size_t vi = 0; vi < arity; ++vi) {
    index_by_decision_.push_back(build_index(config_.index, partition_items(*store_, vi),
                                             distance_, config_.bucket_size,
                                             derive_stream(config_.index_seed, vi)));
  }
}

const MetricIndex& ApproxPolicy::index_for(const Value& v) const {
  return *index_by_decision_[store_->range_index_of(v)];
}

std::optional<double> ApproxPolicy::expected_utility(const Value& parent, const Value& v) const {
  const std::size_t vi = store_->range_index_of(v);
  const MetricIndex& index = *index_by_decision_[vi];
  if (index.size() == 0) return std::nullopt;
  KnnAggregate agg = knn_aggregate(index, parent, config_.k);
  if (agg.clamped) clamp_events_.fetch_add(1, std::memory_order_relaxed);
  if (!(agg.w > 0.0)) return std::nullopt;
  return agg.uw / agg.w;
}

Value ApproxPolicy::decide(const Value& parent) const {
  const auto& range = store_->decision_range();
  std::optional<std::size_t> best;
  double best_eu = 0.0;
  for (std::size_t vi = 0; vi < range.size(); ++vi) {
    std::optional<double> eu = expected_utility(parent, range[vi]);
    if (!eu) continue;
    if (!best || *eu > best_eu) {
      best = vi;
      best_eu = *eu;
    }
  }
  if (!best) {
    // Every decision value was excluded; answer with the tie rule and flag.
    flagged_queries_.fetch_add(1, std::memory_order_relaxed);
    return range.front();
  }
  return range[*best];
}

IndexStats ApproxPolicy::combined_stats() const {
  IndexStats total;
  for (const auto& index : index_by_decision_) {
    IndexStats s = index->stats();
    total.size += s.size;
    total.depth = std::max(total.depth, s.depth);
    total.distance_evals += s.distance_evals;
    total.queries += s.queries;
  }
  return total;
}

void ApproxPolicy::reset_counters() const {
  for (const auto& index : index_by_decision_) index->reset_counters();
}

namespace {

void check_collect_args(const Model& model, ElementId decision_id,
                        std::span<const ElementId> utility_ids) {
  if (!model.node(decision_id).is_decision())
    fail(ErrorKind::InvalidParameter,
         "element " + std::to_string(decision_id) + " is not a decision");
  if (utility_ids.empty())
    fail(ErrorKind::InvalidParameter, "collect_samples: empty utility set");
  for (ElementId u : utility_ids) {
    if (!model.is_utility(u))
      fail(ErrorKind::InvalidParameter,
           "element " + std::to_string(u) + " is not designated as a utility");
  }
}

}  // namespace

SampleStore collect_samples(const Model& model, ElementId decision_id,
                            std::span<const ElementId> utility_ids, const SamplerConfig& config,
                            const DecisionStrategy& strategy) {
  check_collect_args(model, decision_id, utility_ids);
  const DecisionKind& dec = model.node(decision_id).decision();
  SampleStore store(dec.range);
  run_sampler(model, config, strategy, [&](World&& w) {
    double u = 0.0;
    for (ElementId id : utility_ids) u += w.values[id].as_real();
    store.append(std::move(w.values[dec.parent]), std::move(w.values[decision_id]), u, w.weight);
  });
  store.seal();
  return store;
}

SampleStore collect_samples(const Model& model, ElementId decision_id,
                            std::span<const ElementId> utility_ids, const SamplerConfig& config) {
  return collect_samples(model, decision_id, utility_ids, config, uniform_exploration());
}

SampleStore collect_samples_exact(const Model& model, ElementId decision_id,
                                  std::span<const ElementId> utility_ids,
                                  const EnumStrategy& other_decisions) {
  check_collect_args(model, decision_id, utility_ids);
  const DecisionKind& dec = model.node(decision_id).decision();
  SampleStore store(dec.range);
  for (const Value& v : dec.range) {
    EnumStrategy strategy = [&](const ElementNode& node, const Value& parent) -> EnumChoice {
      if (node.id == decision_id) return {{1.0, v}};
      return other_decisions(node, parent);
    };
    struct Row {
      Value parent;
      double pu = 0.0;
      double p = 0.0;
    };
    std::map<std::string, Row> rows;
    for (const EnumeratedWorld& w : exact_enumerate(model, strategy)) {
      double u = 0.0;
      for (ElementId id : utility_ids) u += w.values[id].as_real();
      const Value& t = w.values[dec.parent];
      auto [it, fresh] = rows.try_emplace(t.repr());
      if (fresh) it->second.parent = t;
      it->second.pu += w.probability * u;
      it->second.p += w.probability;
    }
    for (const auto& [key, row] : rows) {
      if (!(row.p > 0.0)) continue;
      store.append(row.parent, v, row.pu / row.p, row.p);
    }
  }
  store.seal();
  return store;
}

PolicyCompiler exact_policy_compiler() {
  return [](SampleStore&& store) -> PolicyPtr {
    return std::make_shared<const ExactPolicy>(ExactPolicy::compile(store));
  };
}

PolicyCompiler approx_policy_compiler(DistanceFunction distance, ApproxPolicyConfig config) {
  return [distance = std::move(distance), config](SampleStore&& store) -> PolicyPtr {
    auto shared = std::make_shared<const SampleStore>(std::move(store));
    return std::make_shared<const ApproxPolicy>(shared, distance, config);
  };
}

namespace {

void check_decision_order(const Model& model, std::span<const ElementId> ordered) {
  for (ElementId d : ordered) {
    if (!model.node(d).is_decision())
      fail(ErrorKind::InvalidParameter, "element " + std::to_string(d) + " is not a decision");
  }
  if (ordered.size() != model.decisions().size())
    fail(ErrorKind::BadOrdering, "the decision sequence must cover every decision of the model");
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      if (ordered[i] == ordered[j])
        fail(ErrorKind::BadOrdering, "duplicate decision in the sequence");
      if (model.reachable(ordered[j], ordered[i]))
        fail(ErrorKind::BadOrdering,
             "decision " + std::to_string(ordered[j]) + " precedes " +
                 std::to_string(ordered[i]) + " in the model but follows it in the sequence");
    }
  }
}

}  // namespace

std::map<ElementId, PolicyPtr> backward_induction(const Model& model,
                                                  std::span<const ElementId> ordered_decisions,
                                                  std::span<const ElementId> utility_ids,
                                                  const SamplerConfig& config,
                                                  const PolicyCompiler& compile) {
  check_decision_order(model, ordered_decisions);
  std::map<ElementId, PolicyPtr> solved;
  std::size_t stage = 0;
  for (std::size_t i = ordered_decisions.size(); i-- > 0; ++stage) {
    ElementId target = ordered_decisions[i];
    DecisionStrategy explore = uniform_exploration();
    DecisionStrategy strategy;
    strategy.choose = [&solved, explore](const ElementNode& node, const Value& parent,
                                         RandomSource& rng) {
      auto it = solved.find(node.id);
      if (it != solved.end()) return it->second->decide(parent);
      return explore.choose(node, parent, rng);
    };
    strategy.exploratory = [&solved](ElementId id) { return solved.find(id) == solved.end(); };

    SamplerConfig stage_config = config;
    stage_config.seed = stage == 0 ? config.seed : derive_stream(config.seed, stage);
    solved[target] = compile(collect_samples(model, target, utility_ids, stage_config, strategy));
  }
  return solved;
}

std::map<ElementId, PolicyPtr> backward_induction_exact(
    const Model& model, std::span<const ElementId> ordered_decisions,
    std::span<const ElementId> utility_ids, const PolicyCompiler& compile) {
  check_decision_order(model, ordered_decisions);
  std::map<ElementId, PolicyPtr> solved;
  for (std::size_t i = ordered_decisions.size(); i-- > 0;) {
    ElementId target = ordered_decisions[i];
    EnumStrategy others = [&solved](const ElementNode& node, const Value& parent) -> EnumChoice {
      auto it = solved.find(node.id);
      if (it != solved.end()) return {{1.0, it->second->decide(parent)}};
      return enum_uniform()(node, parent);
    };
    solved[target] = compile(collect_samples_exact(model, target, utility_ids, others));
  }
  return solved;
}

}  // namespace decnet
