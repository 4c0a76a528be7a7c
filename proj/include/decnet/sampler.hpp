#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "decnet/evaluate.hpp"

namespace decnet {

enum class SampleMethod { Forward, Importance, MetropolisHastings };

struct SamplerConfig {
  SampleMethod method = SampleMethod::Importance;
  int n = 1000;                    // recorded worlds
  std::optional<int> burn_in;      // Metropolis only; defaults to n/10
  std::uint64_t seed = 0;

  void validate() const;
};

using WorldSink = std::function<void(World&&)>;

// Streams `config.n` worlds into `sink`.
//
// Forward: independent prior draws; discrete evidence is handled by
// rejection, so every emitted world has weight 1. Importance: independent
// draws with evidence forced and likelihood weights. Metropolis-Hastings:
// one single-site chain; each step resamples one stochastic element from its
// prior and re-evaluates its descendants, accepting by the evidence
// likelihood ratio (always, when there is no evidence). Post-burn-in states
// are emitted with weight 1.
//
// Worlds are independent of scheduling: world i always uses the stream
// derived from (seed, i), so results are reproducible under a fixed seed.
void run_sampler(const Model& model, const SamplerConfig& config,
                 const DecisionStrategy& strategy, const WorldSink& sink);

std::vector<World> run_sampler(const Model& model, const SamplerConfig& config,
                               const DecisionStrategy& strategy);
std::vector<World> run_sampler(const Model& model, const SamplerConfig& config);

}  // namespace decnet
