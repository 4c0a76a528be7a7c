#pragma once

#include "decnet/distance.hpp"
#include "decnet/element.hpp"

namespace decnet::zoo {

struct SocialConfig {
  int num = 20;
  double prob = 0.15;
  int steps = 20;
  double restart = 0.15;
  double value = 1.0;
  double cost = 2.0;

  void validate() const;
};

// A user's social graph, a restarting random walk modeling how a free
// product spreads, and a boolean give/keep decision observing the graph.
// Utility: value * (distinct people reached - 1) - cost when the product is
// given, 0 otherwise.
struct SocialModel {
  Model model;
  ElementId graph = 0;
  ElementId walk = 0;
  ElementId distinct = 0;
  ElementId free_prod = 0;
  ElementId prod_util = 0;
  SocialConfig config;
};

SocialModel social_network_model(const SocialConfig& config = {});

// Each unordered node pair receives an edge independently with probability
// edge_prob; node 0 is the designated seed.
ElementId graph_gen(ModelBuilder& b, int num_nodes, double edge_prob);

// Walk of `steps` moves from the seed: with probability `restart` jump back
// to the seed, otherwise step to a uniformly random neighbor (stay put when
// isolated). The value is the full visit sequence including the seed.
ElementId random_walk_restart(ModelBuilder& b, ElementId graph, int steps, double restart);

// Number of distinct nodes in a walk sequence.
ElementId distinct_count(ModelBuilder& b, ElementId walk);
int distinct_count(const std::vector<Value>& walk);

// L2 between descending degree sequences (zero-padded to equal length) plus
// the node-count difference. A pseudometric: distinct graphs can tie.
double graph_distance(const GraphValue& a, const GraphValue& b);
DistanceFunction graph_distance_fn();

}  // namespace decnet::zoo
