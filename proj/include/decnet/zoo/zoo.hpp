#pragma once

#include <iosfwd>

#include "decnet/sample_store.hpp"
#include "decnet/sampler.hpp"
#include "decnet/zoo/dosage.hpp"
#include "decnet/zoo/fig2.hpp"
#include "decnet/zoo/social.hpp"

namespace decnet::zoo {

struct ZooConfigs {
  Fig2Config fig2;
  DosageConfig dosage;
  SocialConfig social;
};

// Flat key=value sections:
//
//   [dosage]
//   base = P--Y-
//   time = geometric:0.9
//   matrix = jukes_cantor:0.05
//   se_cost = 1
//   efficacy = 0,1,1,2
//
// Unknown keys are rejected; omitted keys keep their defaults.
ZooConfigs parse_configs(std::istream& in);
ZooConfigs load_configs(const std::string& path);

// One ready-to-run decision problem: the model plus everything a policy or
// experiment needs to know about it.
struct ZooEntry {
  std::string name;
  Model model;
  ElementId decision = 0;
  ElementId parent = 0;
  std::vector<ElementId> utilities;
  DistanceFunction parent_distance;
  std::string parent_codec;
  std::string decision_codec;
  SampleMethod default_method = SampleMethod::Importance;
};

// Names: fig2, dosage, social.
ZooEntry make_model(const std::string& name, const ZooConfigs& configs = {});
const std::vector<std::string>& model_names();

// Builtin codecs plus the protein codec.
CodecRegistry codec_registry();

}  // namespace decnet::zoo
