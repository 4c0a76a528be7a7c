#include "decnet/harness/mc_oracle.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

namespace decnet::harness {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string kind_signature(const Kind& kind) {
  if (const auto* g = std::get_if<GeometricKind>(&kind))
    return "geometric:" + format_double(g->continue_p);
  if (const auto* c = std::get_if<ConstantKind>(&kind)) return "constant:" + c->value.repr();
  if (const auto* s = std::get_if<SelectKind>(&kind)) {
    std::string out = "select:";
    for (const auto& [p, v] : s->options) out += format_double(p) + ":" + v.repr() + ",";
    return out;
  }
  return "other";
}

// Versioned on-disk store of per-parent expected utilities.
class OracleCache {
 public:
  OracleCache(std::string dir, std::string model, std::string digest)
      : model_(std::move(model)), digest_(std::move(digest)) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    path_ = dir + "/oracle-" + model_ + "-" + digest_ + ".json";
    std::ifstream in(path_);
    if (!in) return;
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      if (j.value("version", 0) != 1 || j.value("digest", "") != digest_) return;
      for (auto& [key, arr] : j.at("entries").items())
        entries_[key] = arr.get<std::vector<double>>();
    } catch (const std::exception&) {
      entries_.clear();  // unreadable cache is recomputed
    }
  }

  const std::vector<double>* lookup(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void put(const std::string& key, std::vector<double> values) {
    entries_[key] = std::move(values);
    dirty_ = true;
  }

  void flush() {
    if (path_.empty() || !dirty_) return;
    nlohmann::json j;
    j["version"] = 1;
    j["model"] = model_;
    j["digest"] = digest_;
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [key, values] : entries_) entries[key] = values;
    j["entries"] = std::move(entries);
    std::ofstream out(path_);
    if (!out) fail(ErrorKind::IoFailure, "cannot write oracle cache: " + path_);
    out << j.dump();
  }

 private:
  std::string model_;
  std::string digest_;
  std::string path_;
  std::map<std::string, std::vector<double>> entries_;
  bool dirty_ = false;
};

// Lookup-table oracle over precomputed parents.
UtilityOracle table_oracle(std::vector<Value> range,
                           std::map<std::string, std::vector<double>> table) {
  auto shared = std::make_shared<std::map<std::string, std::vector<double>>>(std::move(table));
  auto shared_range = std::make_shared<std::vector<Value>>(range);
  UtilityOracle oracle;
  oracle.decision_range = std::move(range);
  oracle.expected_utility = [shared, shared_range](const Value& t, const Value& v) {
    auto it = shared->find(t.repr());
    if (it == shared->end())
      fail(ErrorKind::OracleUnavailable,
           "reference oracle was not built for parent " + t.repr());
    for (std::size_t i = 0; i < shared_range->size(); ++i)
      if ((*shared_range)[i] == v) return it->second[i];
    fail(ErrorKind::OracleUnavailable, "decision value outside the oracle range: " + v.repr());
  };
  return oracle;
}

}  // namespace

long long sample_step_count(const Kind& kind, RandomSource& rng) {
  if (const auto* g = std::get_if<GeometricKind>(&kind)) return rng.geometric(g->continue_p);
  if (const auto* c = std::get_if<ConstantKind>(&kind)) return c->value.as_integer();
  if (const auto* s = std::get_if<SelectKind>(&kind)) {
    std::vector<double> probs;
    probs.reserve(s->options.size());
    for (const auto& [p, v] : s->options) probs.push_back(p);
    return s->options[rng.categorical(probs)].second.as_integer();
  }
  fail(ErrorKind::InvalidSpec, "step-count distribution must be geometric, constant or select");
}

UtilityOracle dosage_reference_oracle(const zoo::DosageConfig& config,
                                      std::span<const Value> parents,
                                      const ReferenceOracleConfig& ref) {
  config.validate();
  std::string sig = "dosage|base=" + config.base + "|time=" + kind_signature(config.time) +
                    "|se=" + format_double(config.side_effect_cost) + "|eff=";
  for (int d : config.efficacy.min_dose_by_distance) sig += std::to_string(d) + ",";
  sig += config.efficacy.exact_match ? "|mode=exact" : "|mode=at_least";
  sig += "|mtx=";
  for (const auto& row : config.matrix)
    for (double p : row) sig += format_double(p) + ",";
  sig += "|m=" + std::to_string(ref.samples_per_parent) + "|seed=" + std::to_string(ref.seed);
  OracleCache cache(ref.cache_dir, "dosage", hex(fnv1a(sig)));

  const std::vector<Value> range = {Value::integer(0), Value::integer(1), Value::integer(2)};
  const genetics::SubstitutionCosts costs = genetics::SubstitutionCosts::hamming();
  std::map<std::string, std::vector<double>> table;
  std::map<long long, genetics::NucMatrix> powers;

  for (const Value& parent : parents) {
    const std::string residues = genetics::as_protein(parent).residues();
    if (auto* hit = cache.lookup(residues)) {
      table[parent.repr()] = *hit;
      continue;
    }
    std::vector<const std::vector<std::string>*> codon_choices;
    codon_choices.reserve(residues.size());
    for (char aa : residues) codon_choices.push_back(&genetics::codons_for(aa));

    RandomSource rng(derive_stream(ref.seed, fnv1a(residues)));
    std::array<long long, 3> required_counts{};
    std::string dna;
    for (long long i = 0; i < ref.samples_per_parent; ++i) {
      dna.clear();
      for (const auto* codons : codon_choices)
        dna += (*codons)[rng.uniform_index(codons->size())];
      long long steps = sample_step_count(config.time, rng);
      auto it = powers.find(steps);
      if (it == powers.end())
        it = powers.emplace(steps, genetics::matrix_power(config.matrix, steps)).first;
      const genetics::NucMatrix& mt = it->second;
      for (char& c : dna) {
        const auto& row = mt[static_cast<std::size_t>(genetics::nucleotide_index(c))];
        c = genetics::nucleotide_at(static_cast<int>(rng.categorical(row)));
      }
      double dist = 0.0;
      const std::string prot = genetics::translate_dna(dna);
      for (std::size_t p = 0; p < residues.size(); ++p)
        dist += costs.cost(residues[p], prot[p]);
      int req = config.efficacy.required_dose(dist);
      ++required_counts[static_cast<std::size_t>(req)];
    }
    std::vector<double> eus(3);
    double covered = 0.0;
    for (int dose = 0; dose < 3; ++dose) {
      const double p_here = static_cast<double>(required_counts[static_cast<std::size_t>(dose)]) /
                            static_cast<double>(ref.samples_per_parent);
      covered += p_here;
      const double p_effective = config.efficacy.exact_match ? p_here : covered;
      eus[static_cast<std::size_t>(dose)] =
          p_effective - 0.1 * config.side_effect_cost * static_cast<double>(dose);
    }
    cache.put(residues, eus);
    table[parent.repr()] = std::move(eus);
  }
  cache.flush();
  return table_oracle(range, std::move(table));
}

UtilityOracle social_reference_oracle(const zoo::SocialConfig& config,
                                      std::span<const Value> parents,
                                      const ReferenceOracleConfig& ref) {
  config.validate();
  std::string sig = "social|num=" + std::to_string(config.num) +
                    "|prob=" + format_double(config.prob) +
                    "|steps=" + std::to_string(config.steps) +
                    "|restart=" + format_double(config.restart) +
                    "|value=" + format_double(config.value) +
                    "|cost=" + format_double(config.cost) +
                    "|m=" + std::to_string(ref.samples_per_parent) +
                    "|seed=" + std::to_string(ref.seed);
  OracleCache cache(ref.cache_dir, "social", hex(fnv1a(sig)));

  const std::vector<Value> range = {Value::boolean(true), Value::boolean(false)};
  std::map<std::string, std::vector<double>> table;

  for (const Value& parent : parents) {
    const GraphValue& g = parent.as_graph();
    const std::string key = parent.repr();
    if (auto* hit = cache.lookup(key)) {
      table[key] = *hit;
      continue;
    }
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(g.node_count));
    for (const auto& [a, b] : g.edges) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
    RandomSource rng(derive_stream(ref.seed, fnv1a(key)));
    std::vector<int> visited(static_cast<std::size_t>(g.node_count), -1);
    double total_distinct = 0.0;
    for (long long i = 0; i < ref.samples_per_parent; ++i) {
      std::int32_t pos = g.seed_node;
      int distinct = 1;
      visited[static_cast<std::size_t>(pos)] = static_cast<int>(i);
      for (int s = 0; s < config.steps; ++s) {
        if (rng.uniform01() < config.restart) {
          pos = g.seed_node;
        } else {
          const auto& nbs = adj[static_cast<std::size_t>(pos)];
          if (!nbs.empty()) pos = nbs[rng.uniform_index(nbs.size())];
        }
        if (visited[static_cast<std::size_t>(pos)] != static_cast<int>(i)) {
          visited[static_cast<std::size_t>(pos)] = static_cast<int>(i);
          ++distinct;
        }
      }
      total_distinct += distinct;
    }
    const double mean_distinct = total_distinct / static_cast<double>(ref.samples_per_parent);
    std::vector<double> eus = {config.value * (mean_distinct - 1.0) - config.cost, 0.0};
    cache.put(key, eus);
    table[key] = std::move(eus);
  }
  cache.flush();
  return table_oracle(range, std::move(table));
}

UtilityOracle reference_oracle(const zoo::ZooEntry& entry, const zoo::ZooConfigs& configs,
                               std::span<const Value> parents,
                               const ReferenceOracleConfig& ref) {
  if (entry.name == "fig2") return model_oracle(entry.model, entry.decision);
  if (entry.name == "dosage") return dosage_reference_oracle(configs.dosage, parents, ref);
  if (entry.name == "social") return social_reference_oracle(configs.social, parents, ref);
  fail(ErrorKind::InvalidSpec, "no reference oracle for model " + entry.name);
}

}  // namespace decnet::harness
