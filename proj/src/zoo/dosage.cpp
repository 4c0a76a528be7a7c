#include "decnet/zoo/dosage.hpp"

#include <cmath>

namespace decnet::zoo {

int EfficacyTable::required_dose(double distance) const {
  auto idx = static_cast<std::size_t>(std::max(0.0, distance));
  if (idx >= min_dose_by_distance.size()) idx = min_dose_by_distance.size() - 1;
  return min_dose_by_distance[idx];
}

bool EfficacyTable::effective(double distance, int dose) const {
  const int needed = required_dose(distance);
  return exact_match ? dose == needed : dose >= needed;
}

void EfficacyTable::validate() const {
  if (min_dose_by_distance.empty())
    fail(ErrorKind::InvalidSpec, "efficacy table must not be empty");
  for (int dose : min_dose_by_distance) {
    if (dose < 0 || dose > 2)
      fail(ErrorKind::InvalidSpec, "efficacy table doses must lie in {0,1,2}");
  }
}

void DosageConfig::validate() const {
  if (base.empty()) fail(ErrorKind::InvalidSpec, "dosage: empty base sequence");
  for (char c : base) {
    if (c != '-' && !genetics::is_amino_acid(c))
      fail(ErrorKind::InvalidSpec, std::string("dosage: illegal base character '") + c + "'");
  }
  genetics::validate_matrix(matrix);
  if (!(side_effect_cost >= 0.0))
    fail(ErrorKind::InvalidSpec, "dosage: side-effect cost must be nonnegative");
  efficacy.validate();
  validate_kind(time, 0);
}

DosageModel dosage_network(const DosageConfig& config) {
  config.validate();
  ModelBuilder b;
  DosageModel out;
  out.config = config;

  out.protein = genetics::protein_from_base(b, config.base);
  out.dna = genetics::dna_from_protein(b, out.protein);
  out.time = b.add(config.time, "time");
  out.mutated = genetics::mutate_timed(b, out.dna, out.time, config.matrix);
  out.final_protein = genetics::translate(b, out.mutated);

  const genetics::SubstitutionCosts costs = genetics::SubstitutionCosts::hamming();
  out.mutation_distance = b.apply(
      {out.protein, out.final_protein},
      [costs](std::span<const Value> vs) {
        return Value::real(
            genetics::protein_distance(genetics::as_protein(vs[0]), genetics::as_protein(vs[1]),
                                       costs));
      },
      "mutation_distance");

  out.dose = b.decision(out.protein,
                        {Value::integer(0), Value::integer(1), Value::integer(2)}, "dose");
  out.side_effect = b.flip(0.1, "side_effect");

  const double se_cost = config.side_effect_cost;
  out.side_effect_util = b.apply(
      {out.side_effect, out.dose},
      [se_cost](std::span<const Value> vs) {
        if (!vs[0].as_boolean()) return Value::real(0.0);
        return Value::real(-(se_cost * static_cast<double>(vs[1].as_integer())));
      },
      "side_effect_util");

  const EfficacyTable efficacy = config.efficacy;
  out.drug_util = b.apply(
      {out.mutation_distance, out.dose},
      [efficacy](std::span<const Value> vs) {
        const bool works =
            efficacy.effective(vs[0].as_real(), static_cast<int>(vs[1].as_integer()));
        return Value::real(works ? 1.0 : 0.0);
      },
      "drug_util");

  b.designate_utility(out.side_effect_util);
  b.designate_utility(out.drug_util);
  out.model = std::move(b).build();
  return out;
}

}  // namespace decnet::zoo
