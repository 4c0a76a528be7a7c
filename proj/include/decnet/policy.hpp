#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <span>

#include "decnet/enumerate.hpp"
#include "decnet/metric_index.hpp"
#include "decnet/sample_store.hpp"
#include "decnet/sampler.hpp"

namespace decnet {

// Maps an observed parent value to a decision value. Compiled policies are
// immutable; decide() is const and safe to call concurrently.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Value decide(const Value& parent) const = 0;
};

// Finite lookup compiled by aggregating the store per parent value and
// keeping, for each parent, the decision with the highest weighted mean
// utility. Ties go to the value earliest in the declared range.
class ExactPolicy final : public Policy {
 public:
  static ExactPolicy compile(const SampleStore& store);

  // Raises UnknownParentValue for a parent value absent from the store;
  // callers may fall back to an approximate policy.
  Value decide(const Value& parent) const override;

  std::size_t coverage() const { return choice_.size(); }

 private:
  std::map<std::string, Value> choice_;  // canonical parent repr -> decision
};

struct ApproxPolicyConfig {
  int k = 15;
  IndexKind index = IndexKind::VpTree;
  int bucket_size = 32;
  std::uint64_t index_seed = 0;
};

// Lazy k-nearest-neighbor policy over the sealed store. One index is built
// per decision value because neighbor lookups run within one partition.
class ApproxPolicy final : public Policy {
 public:
  ApproxPolicy(std::shared_ptr<const SampleStore> store, DistanceFunction distance,
               ApproxPolicyConfig config);

  Value decide(const Value& parent) const override;

  // Weighted mean utility of the k nearest samples in the partition of v.
  // Empty when every selected neighbor carries zero weight.
  std::optional<double> expected_utility(const Value& parent, const Value& v) const;

  const SampleStore& store() const { return *store_; }
  const ApproxPolicyConfig& config() const { return config_; }
  const MetricIndex& index_for(const Value& v) const;

  // Diagnostics: queries where k exceeded a partition size, and queries
  // where every decision value was excluded and the tie rule answered.
  std::uint64_t clamp_events() const { return clamp_events_.load(); }
  std::uint64_t flagged_queries() const { return flagged_queries_.load(); }

  IndexStats combined_stats() const;
  void reset_counters() const;

 private:
  std::shared_ptr<const SampleStore> store_;
  DistanceFunction distance_;
  ApproxPolicyConfig config_;
  std::vector<std::unique_ptr<MetricIndex>> index_by_decision_;
  mutable std::atomic<std::uint64_t> clamp_events_{0};
  mutable std::atomic<std::uint64_t> flagged_queries_{0};
};

// Weighted mean utility over the k nearest entries of the store's partition
// for v, under nearest-neighbor weights that are constant on the selected
// neighbors. k larger than the partition clamps to it (recorded in
// *clamp_events when given). The partition must be nonempty.
double knn_expected_utility(const SampleStore& store, const Value& v, const Value& t, int k,
                            const MetricIndex& index_for_v,
                            std::uint64_t* clamp_events = nullptr);

// Runs the sampler and appends one sample per world: the decision's parent
// value, the explored decision value, the summed utilities, and the world
// weight. Deterministic under config.seed.
SampleStore collect_samples(const Model& model, ElementId decision_id,
                            std::span<const ElementId> utility_ids, const SamplerConfig& config,
                            const DecisionStrategy& strategy);
SampleStore collect_samples(const Model& model, ElementId decision_id,
                            std::span<const ElementId> utility_ids, const SamplerConfig& config);

// Enumeration-backed collection: at most one entry per (t, v), carrying the
// exact conditional expected utility and the parent-value probability.
SampleStore collect_samples_exact(const Model& model, ElementId decision_id,
                                  std::span<const ElementId> utility_ids,
                                  const EnumStrategy& other_decisions = enum_uniform());

using PolicyPtr = std::shared_ptr<const Policy>;
using PolicyCompiler = std::function<PolicyPtr(SampleStore&&)>;

PolicyCompiler exact_policy_compiler();
PolicyCompiler approx_policy_compiler(DistanceFunction distance, ApproxPolicyConfig config);

// Solves decisions from last to first. Each round explores the target (and
// any still-unsolved earlier decisions) uniformly while already-solved later
// decisions follow their compiled policies inside every sampled world.
// `ordered_decisions` must list every decision of the model in an order
// consistent with DAG reachability.
std::map<ElementId, PolicyPtr> backward_induction(const Model& model,
                                                  std::span<const ElementId> ordered_decisions,
                                                  std::span<const ElementId> utility_ids,
                                                  const SamplerConfig& config,
                                                  const PolicyCompiler& compile =
                                                      exact_policy_compiler());

// Same procedure with exact enumeration in place of sampling.
std::map<ElementId, PolicyPtr> backward_induction_exact(
    const Model& model, std::span<const ElementId> ordered_decisions,
    std::span<const ElementId> utility_ids,
    const PolicyCompiler& compile = exact_policy_compiler());

}  // namespace decnet
