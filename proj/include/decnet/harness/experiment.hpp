#pragma once

#include <optional>

#include "decnet/harness/mc_oracle.hpp"

namespace decnet::harness {

struct ExperimentSpec {
  std::string model = "fig2";
  std::optional<SampleMethod> method;  // per-model default when unset
  std::vector<int> n_values;
  std::vector<int> k_values;
  int test_samples = 100;
  IndexKind index = IndexKind::VpTree;
  std::uint64_t seed = 0;
  zoo::ZooConfigs configs;
  ReferenceOracleConfig oracle;
  // Off by default so same-seed reruns write byte-identical CSV; switching
  // it on fills mean_query_ms with wall-clock means.
  bool time_queries = false;

  void validate() const;
};

struct LossRow {
  std::string model;
  int n = 0;
  int k = 0;
  std::string index;  // linear | vptree | static:<v>
  std::optional<double> mean_loss;
  std::vector<std::pair<std::string, double>> static_losses;  // encoded v -> loss
  std::optional<double> mean_query_ms;
  std::optional<double> mean_dist_evals;  // per policy query
  std::uint64_t seed = 0;
};

struct IndexStatsNote {
  std::string model;
  int n = 0;
  std::string index;
  std::size_t size = 0;
  int depth = 0;
  double mean_dist_evals = 0.0;
};

struct LossReport {
  std::vector<LossRow> rows;
  // Index structure report for the timing experiment; printed by the CLI,
  // not part of the CSV.
  std::vector<IndexStatsNote> index_stats;
};

// For each (n, k) cell: collect a sample store, compile the k-NN policy,
// draw fresh test parents, and score both the policy and every constant
// baseline against the reference oracle. One data row plus one baseline row
// per decision value, all derived deterministically from the seed.
LossReport run_experiment(const ExperimentSpec& spec);

struct BenchSpec {
  std::vector<int> n_values;
  int k = 100;
  int queries = 5000;
  std::uint64_t seed = 0;
  zoo::ZooConfigs configs;

  void validate() const;
};

// Query-time comparison of the two indexes over the continuous-parent
// model, reporting wall-clock and distance-evaluation means per query.
LossReport bench_index(const BenchSpec& spec);

extern const char* kCsvHeader;
std::string to_csv(const LossReport& report);
void write_csv(const LossReport& report, const std::string& path);

}  // namespace decnet::harness
