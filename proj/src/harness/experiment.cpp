#include "decnet/harness/experiment.hpp"

#include <chrono>
#include <fstream>

namespace decnet::harness {

const char* kCsvHeader = "model,n,k,index,mean_loss,static_losses,mean_query_ms,mean_dist_evals,seed";

void ExperimentSpec::validate() const {
  if (n_values.empty() || k_values.empty())
    fail(ErrorKind::InvalidSpec, "experiment: n and k lists must be nonempty");
  for (int n : n_values)
    if (n < 1) fail(ErrorKind::InvalidSpec, "experiment: n values must be positive");
  for (int k : k_values)
    if (k < 1) fail(ErrorKind::InvalidSpec, "experiment: k values must be positive");
  if (test_samples < 1)
    fail(ErrorKind::InvalidSpec, "experiment: need at least one test sample");
  if (oracle.samples_per_parent < 1)
    fail(ErrorKind::InvalidSpec, "experiment: oracle sample count must be positive");
}

void BenchSpec::validate() const {
  if (n_values.empty()) fail(ErrorKind::InvalidSpec, "bench: n list must be nonempty");
  for (int n : n_values)
    if (n < 1) fail(ErrorKind::InvalidSpec, "bench: n values must be positive");
  if (k < 1) fail(ErrorKind::InvalidSpec, "bench: k must be positive");
  if (queries < 1) fail(ErrorKind::InvalidSpec, "bench: query count must be positive");
}

namespace {

std::vector<Value> draw_test_parents(const zoo::ZooEntry& entry, int count, std::uint64_t seed) {
  std::vector<Value> parents;
  parents.reserve(static_cast<std::size_t>(count));
  DecisionStrategy explore = uniform_exploration();
  for (int i = 0; i < count; ++i) {
    RandomSource rng(derive_stream(seed, static_cast<std::uint64_t>(i)));
    World w = evaluate(entry.model, rng, explore);
    parents.push_back(std::move(w.values[entry.parent]));
  }
  return parents;
}

struct QueryTiming {
  std::optional<double> mean_ms;
  double mean_dist_evals = 0.0;
};

QueryTiming run_queries(const ApproxPolicy& policy, std::span<const Value> queries,
                        bool wall_clock) {
  policy.reset_counters();
  auto started = std::chrono::steady_clock::now();
  for (const Value& q : queries) (void)policy.decide(q);
  auto elapsed = std::chrono::steady_clock::now() - started;
  QueryTiming timing;
  timing.mean_dist_evals = static_cast<double>(policy.combined_stats().distance_evals) /
                           static_cast<double>(queries.size());
  if (wall_clock) {
    timing.mean_ms = std::chrono::duration<double, std::milli>(elapsed).count() /
                     static_cast<double>(queries.size());
  }
  return timing;
}

}  // namespace

LossReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  zoo::ZooEntry entry = zoo::make_model(spec.model, spec.configs);
  const ValueCodec decision_codec = zoo::codec_registry().get(entry.decision_codec);
  SamplerConfig sampler;
  sampler.method = spec.method.value_or(entry.default_method);

  LossReport report;
  std::uint64_t cell = 0;
  for (int n : spec.n_values) {
    for (int k : spec.k_values) {
      const std::uint64_t cell_seed = derive_stream(spec.seed, cell++);
      sampler.n = n;
      sampler.seed = cell_seed;
      auto store = std::make_shared<const SampleStore>(
          collect_samples(entry.model, entry.decision, entry.utilities, sampler));

      ApproxPolicyConfig policy_config;
      policy_config.k = k;
      policy_config.index = spec.index;
      policy_config.index_seed = derive_stream(cell_seed, 1);
      ApproxPolicy policy(store, entry.parent_distance, policy_config);

      std::vector<Value> parents =
          draw_test_parents(entry, spec.test_samples, derive_stream(cell_seed, 2));
      UtilityOracle oracle = reference_oracle(entry, spec.configs, parents, spec.oracle);

      LossRow row;
      row.model = spec.model;
      row.n = n;
      row.k = k;
      row.index = index_kind_name(spec.index);
      row.seed = spec.seed;
      row.mean_loss = compute_loss(oracle, policy, parents);
      auto baselines = static_baselines(oracle, parents);
      for (const auto& [v, loss] : baselines)
        row.static_losses.emplace_back(decision_codec.encode(v), loss);
      QueryTiming timing = run_queries(policy, parents, spec.time_queries);
      row.mean_query_ms = timing.mean_ms;
      row.mean_dist_evals = timing.mean_dist_evals;
      report.rows.push_back(row);

      for (const auto& [v, loss] : baselines) {
        LossRow base;
        base.model = spec.model;
        base.n = n;
        base.k = k;
        base.index = "static:" + decision_codec.encode(v);
        base.mean_loss = loss;
        base.seed = spec.seed;
        report.rows.push_back(std::move(base));
      }
    }
  }
  return report;
}

LossReport bench_index(const BenchSpec& spec) {
  spec.validate();
  zoo::ZooEntry entry = zoo::make_model("fig2", spec.configs);
  SamplerConfig sampler;
  sampler.method = entry.default_method;

  LossReport report;
  std::uint64_t cell = 0;
  for (int n : spec.n_values) {
    const std::uint64_t cell_seed = derive_stream(spec.seed, cell++);
    sampler.n = n;
    sampler.seed = cell_seed;
    auto store = std::make_shared<const SampleStore>(
        collect_samples(entry.model, entry.decision, entry.utilities, sampler));
    std::vector<Value> queries =
        draw_test_parents(entry, spec.queries, derive_stream(cell_seed, 2));

    for (IndexKind kind : {IndexKind::Linear, IndexKind::VpTree}) {
      ApproxPolicyConfig policy_config;
      policy_config.k = spec.k;
      policy_config.index = kind;
      policy_config.index_seed = derive_stream(cell_seed, 1);
      ApproxPolicy policy(store, entry.parent_distance, policy_config);

      LossRow row;
      row.model = entry.name;
      row.n = n;
      row.k = spec.k;
      row.index = index_kind_name(kind);
      row.seed = spec.seed;
      QueryTiming timing = run_queries(policy, queries, true);
      row.mean_query_ms = timing.mean_ms;
      row.mean_dist_evals = timing.mean_dist_evals;
      IndexStats stats = policy.combined_stats();
      report.index_stats.push_back(IndexStatsNote{entry.name, n, index_kind_name(kind),
                                                  stats.size, stats.depth,
                                                  timing.mean_dist_evals});
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string to_csv(const LossReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const LossRow& row : report.rows) {
    out += row.model;
    out += ',' + std::to_string(row.n);
    out += ',' + std::to_string(row.k);
    out += ',' + row.index;
    out += ',';
    if (row.mean_loss) out += format_double(*row.mean_loss);
    out += ',';
    for (std::size_t i = 0; i < row.static_losses.size(); ++i) {
      if (i) out += '|';
      out += row.static_losses[i].first + ':' + format_double(row.static_losses[i].second);
    }
    out += ',';
    if (row.mean_query_ms) out += format_double(*row.mean_query_ms);
    out += ',';
    if (row.mean_dist_evals) out += format_double(*row.mean_dist_evals);
    out += ',' + std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

void write_csv(const LossReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoFailure, "cannot write CSV: " + path);
  out << to_csv(report);
}

}  // namespace decnet::harness
