// Batch front end: runs samplers, compiles policies, scores them against
// reference oracles alongside static baselines, and times index queries.
#include <iostream>

#include <CLI11.hpp>

#include "decnet/harness/experiment.hpp"

namespace {

using namespace decnet;
using namespace decnet::harness;

std::optional<SampleMethod> parse_method(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "forward") return SampleMethod::Forward;
  if (name == "importance") return SampleMethod::Importance;
  if (name == "mh") return SampleMethod::MetropolisHastings;
  fail(ErrorKind::InvalidSpec, "unknown sampler: " + name);
}

int run_command(const std::string& model, const std::string& sampler, std::vector<int> n,
                std::vector<int> k, int test_samples, const std::string& index,
                std::uint64_t seed, const std::string& config_path, const std::string& out,
                long long oracle_samples, const std::string& oracle_cache, bool time_queries) {
  ExperimentSpec spec;
  spec.model = model;
  spec.method = parse_method(sampler);
  spec.n_values = std::move(n);
  spec.k_values = std::move(k);
  spec.test_samples = test_samples;
  if (index == "linear")
    spec.index = IndexKind::Linear;
  else if (index == "vptree")
    spec.index = IndexKind::VpTree;
  else
    fail(ErrorKind::InvalidSpec, "unknown index: " + index);
  spec.seed = seed;
  if (!config_path.empty()) spec.configs = zoo::load_configs(config_path);
  spec.oracle.samples_per_parent = oracle_samples;
  spec.oracle.cache_dir = oracle_cache;
  spec.time_queries = time_queries;

  LossReport report = run_experiment(spec);
  if (!out.empty()) write_csv(report, out);
  std::cout << to_csv(report);
  return 0;
}

int bench_command(std::vector<int> n, int k, int queries, std::uint64_t seed,
                  const std::string& config_path, const std::string& out) {
  BenchSpec spec;
  spec.n_values = std::move(n);
  spec.k = k;
  spec.queries = queries;
  spec.seed = seed;
  if (!config_path.empty()) spec.configs = zoo::load_configs(config_path);

  LossReport report = bench_index(spec);
  if (!out.empty()) write_csv(report, out);
  for (const IndexStatsNote& s : report.index_stats) {
    std::cout << "# index-stats model=" << s.model << " n=" << s.n << " index=" << s.index
              << " size=" << s.size << " depth=" << s.depth
              << " mean_dist_evals=" << s.mean_dist_evals << "\n";
  }
  std::cout << to_csv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision-policy experiment harness"};
  app.require_subcommand(1);

  std::string model = "fig2", sampler, index = "vptree", config_path, out, oracle_cache;
  std::vector<int> n_values, k_values;
  int test_samples = 100, k = 100, queries = 5000;
  std::uint64_t seed = 0;
  long long oracle_samples = 200000;
  bool time_queries = false;

  CLI::App* run = app.add_subcommand("run", "collect samples, compile a policy, report losses");
  run->add_option("--model", model, "fig2 | dosage | social")->required();
  run->add_option("--sampler", sampler, "forward | importance | mh (default per model)");
  run->add_option("--n", n_values, "sample counts")->required()->delimiter(',');
  run->add_option("--k", k_values, "neighbor counts")->required()->delimiter(',');
  run->add_option("--test-samples", test_samples, "test parents per cell");
  run->add_option("--index", index, "linear | vptree");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--config", config_path, "model config file");
  run->add_option("--out", out, "CSV output path");
  run->add_option("--oracle-samples", oracle_samples, "Monte-Carlo reference draws per parent");
  run->add_option("--oracle-cache", oracle_cache, "directory for stored oracle values");
  run->add_flag("--time-queries", time_queries,
                "fill mean_query_ms (wall clock; reruns stop being byte-identical)");

  CLI::App* bench = app.add_subcommand("bench-index", "time k-NN queries on both indexes");
  bench->add_option("--n", n_values, "sample counts")->required()->delimiter(',');
  bench->add_option("--k", k, "neighbors per query");
  bench->add_option("--queries", queries, "queries per cell");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--config", config_path, "model config file");
  bench->add_option("--out", out, "CSV output path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed())
      return run_command(model, sampler, n_values, k_values, test_samples, index, seed,
                         config_path, out, oracle_samples, oracle_cache, time_queries);
    return bench_command(n_values, k, queries, seed, config_path, out);
  } catch (const decnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
