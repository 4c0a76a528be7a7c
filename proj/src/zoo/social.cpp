#include "decnet/zoo/social.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace decnet::zoo {

void SocialConfig::validate() const {
  if (num < 1) fail(ErrorKind::InvalidSpec, "social: need at least one node");
  if (!(prob >= 0.0 && prob <= 1.0))
    fail(ErrorKind::InvalidSpec, "social: edge probability must lie in [0,1]");
  if (steps < 0) fail(ErrorKind::InvalidSpec, "social: negative step count");
  if (!(restart >= 0.0 && restart <= 1.0))
    fail(ErrorKind::InvalidSpec, "social: restart probability must lie in [0,1]");
}

ElementId graph_gen(ModelBuilder& b, int num_nodes, double edge_prob) {
  if (num_nodes < 1) fail(ErrorKind::InvalidParameter, "graph_gen: need at least one node");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    fail(ErrorKind::InvalidParameter, "graph_gen: edge probability must lie in [0,1]");
  std::vector<ElementId> coins;
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::int32_t i = 0; i < num_nodes; ++i) {
    for (std::int32_t j = i + 1; j < num_nodes; ++j) {
      coins.push_back(b.flip(edge_prob));
      pairs.emplace_back(i, j);
    }
  }
  return b.apply(
      coins,
      [num_nodes, pairs](std::span<const Value> vs) {
        GraphValue g;
        g.node_count = num_nodes;
        g.seed_node = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          if (vs[i].as_boolean()) g.edges.push_back(pairs[i]);
        }
        return Value::graph(std::move(g));
      },
      "graph");
}

namespace {

std::shared_ptr<std::vector<std::vector<std::int32_t>>> adjacency_of(const GraphValue& g) {
  auto adj = std::make_shared<std::vector<std::vector<std::int32_t>>>(
      static_cast<std::size_t>(g.node_count));
  for (const auto& [a, bidx] : g.edges) {
    (*adj)[static_cast<std::size_t>(a)].push_back(bidx);
    (*adj)[static_cast<std::size_t>(bidx)].push_back(a);
  }
  return adj;
}

}  // namespace

ElementId random_walk_restart(ModelBuilder& b, ElementId graph, int steps, double restart) {
  if (steps < 0) fail(ErrorKind::InvalidParameter, "random walk: negative step count");
  if (!(restart >= 0.0 && restart <= 1.0))
    fail(ErrorKind::InvalidParameter, "random walk: restart probability must lie in [0,1]");
  return b.chain(
      graph,
      [steps, restart](const Value& gv) {
        const GraphValue& g = gv.as_graph();
        auto adj = adjacency_of(g);
        const std::int32_t seed = g.seed_node;
        ModelBuilder f;
        std::vector<ElementId> path;
        ElementId prev = f.constant(Value::integer(seed));
        path.push_back(prev);
        for (int s = 0; s < steps; ++s) {
          prev = f.chain(
              prev,
              [adj, seed, restart](const Value& pos) {
                const auto& nbs = (*adj)[static_cast<std::size_t>(pos.as_integer())];
                std::vector<std::pair<double, Value>> options;
                options.emplace_back(restart, Value::integer(seed));
                if (nbs.empty()) {
                  options.emplace_back(1.0 - restart, pos);
                } else {
                  const double p = (1.0 - restart) / static_cast<double>(nbs.size());
                  for (std::int32_t nb : nbs) options.emplace_back(p, Value::integer(nb));
                }
                ModelBuilder step;
                ElementId root = step.select(std::move(options));
                return ChainOutcome::fresh(std::move(step).build(), root);
              },
              {prev});
          path.push_back(prev);
        }
        ElementId root = f.apply(path, [](std::span<const Value> vs) {
          return Value::seq(std::vector<Value>(vs.begin(), vs.end()));
        });
        return ChainOutcome::fresh(std::move(f).build(), root);
      },
      {}, "walk");
}

int distinct_count(const std::vector<Value>& walk) {
  std::set<std::int64_t> seen;
  for (const Value& v : walk) seen.insert(v.as_integer());
  return static_cast<int>(seen.size());
}

ElementId distinct_count(ModelBuilder& b, ElementId walk) {
  return b.apply(
      {walk},
      [](std::span<const Value> vs) {
        return Value::integer(distinct_count(vs[0].as_seq()));
      },
      "distinct");
}

double graph_distance(const GraphValue& a, const GraphValue& b) {
  std::vector<int> da = a.degree_sequence_desc();
  std::vector<int> db = b.degree_sequence_desc();
  const std::size_t n = std::max(da.size(), db.size());
  da.resize(n, 0);
  db.resize(n, 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(da[i] - db[i]);
    sum += d * d;
  }
  return std::sqrt(sum) + std::abs(static_cast<double>(a.node_count - b.node_count));
}

DistanceFunction graph_distance_fn() {
  return [](const Value& a, const Value& b) { return graph_distance(a.as_graph(), b.as_graph()); };
}

SocialModel social_network_model(const SocialConfig& config) {
  config.validate();
  ModelBuilder b;
  SocialModel out;
  out.config = config;
  out.graph = graph_gen(b, config.num, config.prob);
  out.walk = random_walk_restart(b, out.graph, config.steps, config.restart);
  out.distinct = distinct_count(b, out.walk);
  out.free_prod = b.decision(out.graph, {Value::boolean(true), Value::boolean(false)},
                             "free_prod");
  const double value = config.value;
  const double cost = config.cost;
  out.prod_util = b.apply(
      {out.free_prod, out.distinct},
      [value, cost](std::span<const Value> vs) {
        if (!vs[0].as_boolean()) return Value::real(0.0);
        return Value::real(value * (static_cast<double>(vs[1].as_integer()) - 1.0) - cost);
      },
      "prod_util");
  b.designate_utility(out.prod_util);
  out.model = std::move(b).build();
  return out;
}

}  // namespace decnet::zoo
