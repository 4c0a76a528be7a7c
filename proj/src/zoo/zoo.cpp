#include "decnet/zoo/zoo.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace decnet::zoo {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return d;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidSpec, "config: malformed number for " + key + ": " + s);
  }
}

int parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    int i = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return i;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidSpec, "config: malformed integer for " + key + ": " + s);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

// geometric:<p> | constant:<k> | select:<v1>:<p1>,<v2>:<p2>,...
Kind parse_time_kind(const std::string& s) {
  auto colon = s.find(':');
  std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "geometric") return GeometricKind{parse_real("time", rest)};
  if (head == "constant")
    return ConstantKind{Value::integer(parse_int("time", rest))};
  if (head == "select") {
    SelectKind k;
    for (const std::string& part : split(rest, ',')) {
      auto fields = split(part, ':');
      if (fields.size() != 2)
        fail(ErrorKind::InvalidSpec, "config: time select entries look like value:prob");
      k.options.emplace_back(parse_real("time", fields[1]),
                             Value::integer(parse_int("time", fields[0])));
    }
    return k;
  }
  fail(ErrorKind::InvalidSpec, "config: unknown time distribution: " + s);
}

genetics::NucMatrix parse_matrix(const std::string& s) {
  if (s == "identity") return genetics::identity_matrix();
  auto colon = s.find(':');
  if (colon != std::string::npos && s.substr(0, colon) == "jukes_cantor")
    return genetics::jukes_cantor(parse_real("matrix", s.substr(colon + 1)));
  fail(ErrorKind::InvalidSpec, "config: unknown matrix spec: " + s);
}

void apply_key(ZooConfigs& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
  if (section == "fig2") {
    if (key == "lo") cfg.fig2.lo = parse_real(key, value);
    else if (key == "hi") cfg.fig2.hi = parse_real(key, value);
    else fail(ErrorKind::InvalidSpec, "config: unknown key fig2." + key);
    return;
  }
  if (section == "dosage") {
    if (key == "base") cfg.dosage.base = value;
    else if (key == "time") cfg.dosage.time = parse_time_kind(value);
    else if (key == "matrix") cfg.dosage.matrix = parse_matrix(value);
    else if (key == "se_cost") cfg.dosage.side_effect_cost = parse_real(key, value);
    else if (key == "efficacy") {
      cfg.dosage.efficacy.min_dose_by_distance.clear();
      for (const std::string& part : split(value, ','))
        cfg.dosage.efficacy.min_dose_by_distance.push_back(parse_int(key, trim(part)));
    } else if (key == "efficacy_mode") {
      if (value == "exact") cfg.dosage.efficacy.exact_match = true;
      else if (value == "at_least") cfg.dosage.efficacy.exact_match = false;
      else fail(ErrorKind::InvalidSpec, "config: efficacy_mode is exact or at_least");
    } else {
      fail(ErrorKind::InvalidSpec, "config: unknown key dosage." + key);
    }
    return;
  }
  if (section == "social") {
    if (key == "num") cfg.social.num = parse_int(key, value);
    else if (key == "prob") cfg.social.prob = parse_real(key, value);
    else if (key == "steps") cfg.social.steps = parse_int(key, value);
    else if (key == "restart") cfg.social.restart = parse_real(key, value);
    else if (key == "value") cfg.social.value = parse_real(key, value);
    else if (key == "cost") cfg.social.cost = parse_real(key, value);
    else fail(ErrorKind::InvalidSpec, "config: unknown key social." + key);
    return;
  }
  fail(ErrorKind::InvalidSpec, "config: unknown section [" + section + "]");
}

}  // namespace

ZooConfigs parse_configs(std::istream& in) {
  ZooConfigs cfg;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrorKind::InvalidSpec,
             "config line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      fail(ErrorKind::InvalidSpec,
           "config line " + std::to_string(line_no) + ": expected key = value inside a section");
    apply_key(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ZooConfigs load_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoFailure, "cannot open config file: " + path);
  return parse_configs(in);
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"fig2", "dosage", "social"};
  return names;
}

ZooEntry make_model(const std::string& name, const ZooConfigs& configs) {
  ZooEntry entry;
  entry.name = name;
  if (name == "fig2") {
    Fig2Model m = fig2_network(configs.fig2);
    entry.model = std::move(m.model);
    entry.decision = m.dec;
    entry.parent = m.pa;
    entry.utilities = {m.util};
    entry.parent_distance = absolute_distance();
    entry.parent_codec = "real";
    entry.decision_codec = "int";
    entry.default_method = SampleMethod::MetropolisHastings;
    return entry;
  }
  if (name == "dosage") {
    DosageModel m = dosage_network(configs.dosage);
    entry.model = std::move(m.model);
    entry.decision = m.dose;
    entry.parent = m.protein;
    entry.utilities = {m.side_effect_util, m.drug_util};
    entry.parent_distance = genetics::protein_distance_fn();
    entry.parent_codec = "protein";
    entry.decision_codec = "int";
    entry.default_method = SampleMethod::Importance;
    return entry;
  }
  if (name == "social") {
    SocialModel m = social_network_model(configs.social);
    entry.model = std::move(m.model);
    entry.decision = m.free_prod;
    entry.parent = m.graph;
    entry.utilities = {m.prod_util};
    entry.parent_distance = graph_distance_fn();
    entry.parent_codec = "graph";
    entry.decision_codec = "bool";
    entry.default_method = SampleMethod::Importance;
    return entry;
  }
  fail(ErrorKind::InvalidSpec, "unknown model: " + name);
}

CodecRegistry codec_registry() {
  CodecRegistry reg = CodecRegistry::builtin();
  reg.add(ValueCodec{"protein",
                     [](const Value& v) { return genetics::as_protein(v).residues(); },
                     [](const std::string& s) { return genetics::protein_value(s); }});
  return reg;
}

}  // namespace decnet::zoo
