#pragma once

#include "decnet/zoo/genetics.hpp"

namespace decnet::zoo {

// Dose required by mutation distance. Distances index the table; past the
// end the last entry applies. In exact mode the drug works only at the
// required dose (overdosing wastes the drug); otherwise any dose at or
// above the requirement works.
struct EfficacyTable {
  std::vector<int> min_dose_by_distance = {0, 1, 1, 2};
  bool exact_match = true;

  int required_dose(double distance) const;
  bool effective(double distance, int dose) const;
  void validate() const;
};

struct DosageConfig {
  std::string base = "P--Y-";
  // Distribution of the number of mutation steps (an element kind with
  // integer support).
  Kind time = GeometricKind{0.45};
  genetics::NucMatrix matrix = genetics::jukes_cantor(0.05);
  double side_effect_cost = 0.9;
  EfficacyTable efficacy;

  void validate() const;
};

// Protein -> DNA -> mutation -> back-translation, with a three-level dosage
// decision observing the original protein. Utilities: a side-effect penalty
// of -(cost * dose) with probability 0.1, and a 0/1 drug effect that pays
// off when the dose covers the observed mutation distance.
struct DosageModel {
  Model model;
  ElementId protein = 0;
  ElementId dna = 0;
  ElementId time = 0;
  ElementId mutated = 0;
  ElementId final_protein = 0;
  ElementId mutation_distance = 0;
  ElementId dose = 0;
  ElementId side_effect = 0;
  ElementId side_effect_util = 0;
  ElementId drug_util = 0;
  DosageConfig config;
};

DosageModel dosage_network(const DosageConfig& config = {});

}  // namespace decnet::zoo
