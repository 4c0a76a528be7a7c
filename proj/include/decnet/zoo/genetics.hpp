#pragma once

#include <array>
#include <string>
#include <vector>

#include "decnet/distance.hpp"
#include "decnet/element.hpp"
#include "decnet/random.hpp"

namespace decnet::genetics {

// The 20 amino acids, plus '*' for a sequence truncated by a stop codon.
inline constexpr char kTruncated = '*';
const std::string& amino_acids();
bool is_amino_acid(char c);

// Standard genetic code over DNA codons. translate_codon returns '*' for
// the three stop codons.
char translate_codon(const char* codon);
const std::vector<std::string>& codons_for(char amino_acid);

int nucleotide_index(char nt);  // ACGT -> 0..3
char nucleotide_at(int index);

// Fixed-length residue sequence. Base sequences never contain '*';
// translation of mutated DNA may.
class ProteinSeq final : public OpaqueObject {
 public:
  explicit ProteinSeq(std::string residues);
  const std::string& residues() const { return residues_; }
  std::size_t length() const { return residues_.size(); }

  std::string type_name() const override { return "protein"; }
  std::string repr() const override { return residues_; }
  bool equals(const OpaqueObject& other) const override;

 private:
  std::string residues_;
};

class DNASeq final : public OpaqueObject {
 public:
  explicit DNASeq(std::string nucleotides);
  const std::string& nucleotides() const { return nucleotides_; }

  std::string type_name() const override { return "dna"; }
  std::string repr() const override { return nucleotides_; }
  bool equals(const OpaqueObject& other) const override;

 private:
  std::string nucleotides_;
};

Value protein_value(std::string residues);
Value dna_value(std::string nucleotides);
const ProteinSeq& as_protein(const Value& v);
const DNASeq& as_dna(const Value& v);

// Row-stochastic 4x4 per-step mutation matrix, indexed by nucleotide.
using NucMatrix = std::array<std::array<double, 4>, 4>;

void validate_matrix(const NucMatrix& m);  // rows sum to 1 within 1e-9, entries >= 0
NucMatrix identity_matrix();
NucMatrix jukes_cantor(double off_diagonal);
NucMatrix matrix_power(const NucMatrix& m, long long steps);

// Kernel behind the mutation element: each site takes `steps` independent
// Markov steps (realized through the t-step transition matrix).
std::string mutate_dna(const std::string& dna, long long steps, const NucMatrix& m,
                       RandomSource& rng);

// Codon-by-codon translation; stop codons map to the truncated symbol.
std::string translate_dna(const std::string& dna);

// Per-position substitution costs over the 20 amino acids plus '*'.
class SubstitutionCosts {
 public:
  // Zero diagonal, 1 elsewhere; '*' costs the maximum substitution cost
  // (also 1) against every amino acid.
  static SubstitutionCosts hamming();

  double cost(char a, char b) const;
  double max_cost() const { return max_cost_; }

 private:
  SubstitutionCosts() = default;
  std::array<std::array<double, 21>, 21> table_{};
  double max_cost_ = 0.0;
};

double protein_distance(const ProteinSeq& a, const ProteinSeq& b, const SubstitutionCosts& costs);
DistanceFunction protein_distance_fn(SubstitutionCosts costs = SubstitutionCosts::hamming());

// ---- model elements -------------------------------------------------------

// Fixed positions copy the base; each '-' draws uniformly from the 20 amino
// acids. The base may only contain amino-acid letters and '-'.
ElementId protein_from_base(ModelBuilder& b, const std::string& base);

// Uniform choice among each residue's synonymous codons, concatenated.
ElementId dna_from_protein(ModelBuilder& b, ElementId protein);

// Mutation over a fixed number of steps, or over the value of a step-count
// element (nonnegative integer).
ElementId mutate(ModelBuilder& b, ElementId dna, long long steps, const NucMatrix& m);
ElementId mutate_timed(ModelBuilder& b, ElementId dna, ElementId steps_element,
                       const NucMatrix& m);

ElementId translate(ModelBuilder& b, ElementId dna);

}  // namespace decnet::genetics
