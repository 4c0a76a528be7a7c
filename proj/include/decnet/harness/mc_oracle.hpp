#pragma once

#include "decnet/harness/loss.hpp"
#include "decnet/zoo/zoo.hpp"

namespace decnet::harness {

// Long-run Monte-Carlo references for the models without a closed form.
// The simulators below re-derive each network's generative process directly
// (no element machinery), so they stay independent of the code paths they
// judge. Estimates are cached on disk keyed by a config digest, so repeated
// runs reuse the stored values.
struct ReferenceOracleConfig {
  long long samples_per_parent = 200000;
  std::uint64_t seed = 0xDECAF;
  std::string cache_dir;  // empty disables the on-disk cache
};

UtilityOracle dosage_reference_oracle(const zoo::DosageConfig& config,
                                      std::span<const Value> parents,
                                      const ReferenceOracleConfig& ref);

UtilityOracle social_reference_oracle(const zoo::SocialConfig& config,
                                      std::span<const Value> parents,
                                      const ReferenceOracleConfig& ref);

// Dispatch: closed form for fig2, Monte Carlo for dosage and social.
UtilityOracle reference_oracle(const zoo::ZooEntry& entry, const zoo::ZooConfigs& configs,
                               std::span<const Value> parents, const ReferenceOracleConfig& ref);

// Direct draw from a step-count kind (Geometric, Constant or Select).
long long sample_step_count(const Kind& kind, RandomSource& rng);

}  // namespace decnet::harness
