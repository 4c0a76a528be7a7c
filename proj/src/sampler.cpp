#include "decnet/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace decnet {

void SamplerConfig::validate() const {
  if (n < 1) fail(ErrorKind::InvalidSpec, "sampler: n must be at least 1");
  if (burn_in && *burn_in < 0) fail(ErrorKind::InvalidSpec, "sampler: negative burn-in");
}

namespace {

bool kind_is_continuous(const Kind& kind) {
  return std::holds_alternative<UniformKind>(kind) ||
         std::holds_alternative<NormalKind>(kind) ||
         std::holds_alternative<GammaKind>(kind);
}

bool kind_is_stochastic(const Kind& kind) {
  return !(std::holds_alternative<ConstantKind>(kind) ||
           std::holds_alternative<ApplyKind>(kind) ||
           std::holds_alternative<DecisionKind>(kind));
}

void run_forward(const Model& model, const SamplerConfig& config,
                 const DecisionStrategy& strategy, const WorldSink& sink) {
  for (const auto& [id, obs] : model.evidence()) {
    if (kind_is_continuous(model.node(id).kind))
      fail(ErrorKind::UnsupportedEvidence,
           "forward sampling cannot condition on exact values of continuous element " +
               std::to_string(id));
  }
  const long long n = config.n;
  const long long max_attempts = std::max<long long>(n, 100LL * n);
  long long accepted = 0;
  for (long long attempt = 0; attempt < max_attempts && accepted < n; ++attempt) {
    RandomSource rng(derive_stream(config.seed, static_cast<std::uint64_t>(attempt)));
    World w = evaluate(model, rng, strategy);
    if (w.weight > 1.0)
      fail(ErrorKind::UnsupportedEvidence,
           "forward sampling requires discrete evidence (likelihood exceeded 1)");
    // Accepting with probability equal to the evidence likelihood is
    // rejection sampling; accepted worlds carry weight 1.
    if (w.weight < 1.0 && !(rng.uniform01() < w.weight)) {
      if (attempt + 1 >= n && accepted == 0)
        fail(ErrorKind::DegenerateEvidence,
             "no world satisfied the evidence after " + std::to_string(attempt + 1) + " draws");
      continue;
    }
    w.weight = 1.0;
    ++accepted;
    sink(std::move(w));
  }
  if (accepted < n)
    fail(ErrorKind::DegenerateEvidence,
         "evidence too improbable: accepted " + std::to_string(accepted) + " of " +
             std::to_string(n) + " requested worlds within the attempt budget");
}

void run_importance(const Model& model, const SamplerConfig& config,
                    const DecisionStrategy& strategy, const WorldSink& sink) {
  bool any_positive = false;
  for (int i = 0; i < config.n; ++i) {
    RandomSource rng(derive_stream(config.seed, static_cast<std::uint64_t>(i)));
    World w = evaluate(model, rng, strategy);
    any_positive = any_positive || w.weight > 0.0;
    sink(std::move(w));
  }
  if (!model.evidence().empty() && !any_positive)
    fail(ErrorKind::DegenerateEvidence,
         "all " + std::to_string(config.n) + " importance weights are zero");
}

struct MhState {
  std::vector<Value> values;
  std::vector<double> elem_lik;  // per-element evidence likelihood
};

void run_metropolis(const Model& model, const SamplerConfig& config,
                    const DecisionStrategy& strategy, const WorldSink& sink) {
  RandomSource rng(config.seed);
  detail::EvalCore core{model, rng, strategy, nullptr};

  // Proposal sites: elements whose evaluation consumes randomness. Atomic
  // evidence elements are pinned, but an observed chain still resamples its
  // fragment internals, so it stays in.
  std::vector<ElementId> sites;
  for (const ElementNode& n : model.elements()) {
    if (n.is_decision()) {
      if (strategy.exploratory && strategy.exploratory(n.id)) sites.push_back(n.id);
    } else if (std::holds_alternative<ChainKind>(n.kind)) {
      sites.push_back(n.id);
    } else if (kind_is_stochastic(n.kind) && !model.observed(n.id)) {
      sites.push_back(n.id);
    }
  }
  std::vector<std::vector<ElementId>> site_descendants(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i)
    site_descendants[i] = model.descendants(sites[i]);

  // Initial state must satisfy the evidence.
  MhState state;
  state.values.resize(model.size());
  state.elem_lik.assign(model.size(), 1.0);
  bool ok = false;
  for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
    ok = true;
    for (const ElementNode& n : model.elements()) {
      double lik = 1.0;
      state.values[n.id] = core.eval(n, state.values, lik);
      state.elem_lik[n.id] = lik;
      if (lik <= 0.0) {
        ok = false;
        break;
      }
    }
  }
  if (!ok)
    fail(ErrorKind::DegenerateEvidence,
         "could not initialize a Metropolis state consistent with the evidence");

  const int burn = config.burn_in.value_or(config.n / 10);
  std::vector<std::pair<ElementId, Value>> saved_values;
  std::vector<std::pair<ElementId, double>> saved_lik;

  auto step = [&]() {
    if (sites.empty()) return;
    std::size_t pick = rng.uniform_index(sites.size());
    ElementId s = sites[pick];
    const auto& desc = site_descendants[pick];

    saved_values.clear();
    saved_lik.clear();
    double lik_old = 1.0, lik_new = 1.0;

    auto reeval = [&](ElementId id) {
      saved_values.emplace_back(id, state.values[id]);
      saved_lik.emplace_back(id, state.elem_lik[id]);
      lik_old *= state.elem_lik[id];
      double lik = 1.0;
      state.values[id] = core.eval(model.node(id), state.values, lik);
      state.elem_lik[id] = lik;
      lik_new *= lik;
    };
    reeval(s);
    for (ElementId d : desc) reeval(d);

    const double ratio = lik_old > 0.0 ? lik_new / lik_old : (lik_new > 0.0 ? 2.0 : 0.0);
    const bool accept = ratio >= 1.0 || rng.uniform01() < ratio;
    if (!accept) {
      for (std::size_t i = saved_values.size(); i-- > 0;)
        state.values[saved_values[i].first] = std::move(saved_values[i].second);
      for (const auto& [id, lik] : saved_lik) state.elem_lik[id] = lik;
    }
  };

  for (int i = 0; i < burn; ++i) step();
  for (int i = 0; i < config.n; ++i) {
    step();
    World w;
    w.values = state.values;
    w.weight = 1.0;
    sink(std::move(w));
  }
}

}  // namespace

void run_sampler(const Model& model, const SamplerConfig& config,
                 const DecisionStrategy& strategy, const WorldSink& sink) {
  config.validate();
  switch (config.method) {
    case SampleMethod::Forward: run_forward(model, config, strategy, sink); break;
    case SampleMethod::Importance: run_importance(model, config, strategy, sink); break;
    case SampleMethod::MetropolisHastings: run_metropolis(model, config, strategy, sink); break;
  }
}

std::vector<World> run_sampler(const Model& model, const SamplerConfig& config,
                               const DecisionStrategy& strategy) {
  std::vector<World> out;
  out.reserve(static_cast<std::size_t>(config.n));
  run_sampler(model, config, strategy, [&](World&& w) { out.push_back(std::move(w)); });
  return out;
}

std::vector<World> run_sampler(const Model& model, const SamplerConfig& config) {
  return run_sampler(model, config, uniform_exploration());
}

}  // namespace decnet
