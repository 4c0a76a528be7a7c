#include "decnet/zoo/genetics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace decnet::genetics {

namespace {

const char* kAlphabet = "ACDEFGHIKLMNPQRSTVWY";

struct CodonTables {
  std::map<std::string, char> to_amino;
  std::map<char, std::vector<std::string>> from_amino;

  CodonTables() {
    static const struct {
      const char* codon;
      char aa;
    } kCode[] = {
        {"TTT", 'F'}, {"TTC", 'F'}, {"TTA", 'L'}, {"TTG", 'L'},
        {"CTT", 'L'}, {"CTC", 'L'}, {"CTA", 'L'}, {"CTG", 'L'},
        {"ATT", 'I'}, {"ATC", 'I'}, {"ATA", 'I'}, {"ATG", 'M'},
        {"GTT", 'V'}, {"GTC", 'V'}, {"GTA", 'V'}, {"GTG", 'V'},
        {"TCT", 'S'}, {"TCC", 'S'}, {"TCA", 'S'}, {"TCG", 'S'},
        {"CCT", 'P'}, {"CCC", 'P'}, {"CCA", 'P'}, {"CCG", 'P'},
        {"ACT", 'T'}, {"ACC", 'T'}, {"ACA", 'T'}, {"ACG", 'T'},
        {"GCT", 'A'}, {"GCC", 'A'}, {"GCA", 'A'}, {"GCG", 'A'},
        {"TAT", 'Y'}, {"TAC", 'Y'}, {"TAA", '*'}, {"TAG", '*'},
        {"CAT", 'H'}, {"CAC", 'H'}, {"CAA", 'Q'}, {"CAG", 'Q'},
        {"AAT", 'N'}, {"AAC", 'N'}, {"AAA", 'K'}, {"AAG", 'K'},
        {"GAT", 'D'}, {"GAC", 'D'}, {"GAA", 'E'}, {"GAG", 'E'},
        {"TGT", 'C'}, {"TGC", 'C'}, {"TGA", '*'}, {"TGG", 'W'},
        {"CGT", 'R'}, {"CGC", 'R'}, {"CGA", 'R'}, {"CGG", 'R'},
        {"AGT", 'S'}, {"AGC", 'S'}, {"AGA", 'R'}, {"AGG", 'R'},
        {"GGT", 'G'}, {"GGC", 'G'}, {"GGA", 'G'}, {"GGG", 'G'},
    };
    for (const auto& entry : kCode) {
      to_amino[entry.codon] = entry.aa;
      if (entry.aa != kTruncated) from_amino[entry.aa].push_back(entry.codon);
    }
  }
};

const CodonTables& tables() {
  static const CodonTables t;
  return t;
}

}  // namespace

const std::string& amino_acids() {
  static const std::string alphabet(kAlphabet);
  return alphabet;
}

bool is_amino_acid(char c) { return amino_acids().find(c) != std::string::npos; }

char translate_codon(const char* codon) {
  auto it = tables().to_amino.find(std::string(codon, 3));
  if (it == tables().to_amino.end())
    fail(ErrorKind::InvalidValue, "not a DNA codon: " + std::string(codon, 3));
  return it->second;
}

const std::vector<std::string>& codons_for(char amino_acid) {
  auto it = tables().from_amino.find(amino_acid);
  if (it == tables().from_amino.end())
    fail(ErrorKind::InvalidValue, std::string("no codons for symbol '") + amino_acid + "'");
  return it->second;
}

int nucleotide_index(char nt) {
  switch (nt) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
  }
  fail(ErrorKind::InvalidValue, std::string("not a nucleotide: '") + nt + "'");
}

char nucleotide_at(int index) {
  static const char kNts[] = "ACGT";
  if (index < 0 || index > 3) fail(ErrorKind::InvalidValue, "nucleotide index out of range");
  return kNts[index];
}

ProteinSeq::ProteinSeq(std::string residues) : residues_(std::move(residues)) {
  for (char c : residues_) {
    if (!is_amino_acid(c) && c != kTruncated)
      fail(ErrorKind::InvalidValue, std::string("illegal residue '") + c + "'");
  }
}

bool ProteinSeq::equals(const OpaqueObject& other) const {
  const auto* p = dynamic_cast<const ProteinSeq*>(&other);
  return p && p->residues_ == residues_;
}

DNASeq::DNASeq(std::string nucleotides) : nucleotides_(std::move(nucleotides)) {
  if (nucleotides_.size() % 3 != 0)
    fail(ErrorKind::InvalidValue, "DNA length must be divisible by 3");
  for (char c : nucleotides_) nucleotide_index(c);
}

bool DNASeq::equals(const OpaqueObject& other) const {
  const auto* p = dynamic_cast<const DNASeq*>(&other);
  return p && p->nucleotides_ == nucleotides_;
}

Value protein_value(std::string residues) {
  return Value::opaque(std::make_shared<const ProteinSeq>(std::move(residues)));
}

Value dna_value(std::string nucleotides) {
  return Value::opaque(std::make_shared<const DNASeq>(std::move(nucleotides)));
}

const ProteinSeq& as_protein(const Value& v) { return *v.as_opaque_as<ProteinSeq>(); }
const DNASeq& as_dna(const Value& v) { return *v.as_opaque_as<DNASeq>(); }

void validate_matrix(const NucMatrix& m) {
  for (const auto& row : m) {
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) fail(ErrorKind::InvalidParameter, "mutation matrix: negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      fail(ErrorKind::InvalidParameter, "mutation matrix: rows must sum to 1");
  }
}

NucMatrix identity_matrix() {
  NucMatrix m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

NucMatrix jukes_cantor(double off_diagonal) {
  if (!(off_diagonal >= 0.0) || off_diagonal > 1.0 / 3.0)
    fail(ErrorKind::InvalidParameter, "jukes_cantor: off-diagonal rate must lie in [0, 1/3]");
  NucMatrix m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = i == j ? 1.0 - 3.0 * off_diagonal : off_diagonal;
  return m;
}

namespace {

NucMatrix multiply(const NucMatrix& a, const NucMatrix& b) {
  NucMatrix out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (int j = 0; j < 4; ++j) out[i][j] += aik * b[k][j];
    }
  return out;
}

}  // namespace

NucMatrix matrix_power(const NucMatrix& m, long long steps) {
  if (steps < 0) fail(ErrorKind::InvalidParameter, "matrix power: negative exponent");
  NucMatrix result = identity_matrix();
  NucMatrix base = m;
  while (steps > 0) {
    if (steps & 1) result = multiply(result, base);
    base = multiply(base, base);
    steps >>= 1;
  }
  return result;
}

std::string mutate_dna(const std::string& dna, long long steps, const NucMatrix& m,
                       RandomSource& rng) {
  if (steps < 0) fail(ErrorKind::InvalidParameter, "mutate: negative step count");
  validate_matrix(m);
  NucMatrix mt = matrix_power(m, steps);
  std::string out = dna;
  for (char& c : out) {
    const auto& row = mt[static_cast<std::size_t>(nucleotide_index(c))];
    c = nucleotide_at(static_cast<int>(rng.categorical(row)));
  }
  return out;
}

std::string translate_dna(const std::string& dna) {
  if (dna.size() % 3 != 0)
    fail(ErrorKind::InvalidValue, "translate: DNA length must be divisible by 3");
  std::string out;
  out.reserve(dna.size() / 3);
  for (std::size_t i = 0; i < dna.size(); i += 3) out += translate_codon(dna.data() + i);
  return out;
}

SubstitutionCosts SubstitutionCosts::hamming() {
  SubstitutionCosts costs;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) costs.table_[i][j] = i == j ? 0.0 : 1.0;
  costs.max_cost_ = 1.0;
  return costs;
}

namespace {

int residue_index(char c) {
  if (c == kTruncated) return 20;
  auto pos = amino_acids().find(c);
  if (pos == std::string::npos)
    fail(ErrorKind::InvalidValue, std::string("illegal residue '") + c + "'");
  return static_cast<int>(pos);
}

}  // namespace

double SubstitutionCosts::cost(char a, char b) const {
  return table_[static_cast<std::size_t>(residue_index(a))]
               [static_cast<std::size_t>(residue_index(b))];
}

double protein_distance(const ProteinSeq& a, const ProteinSeq& b, const SubstitutionCosts& costs) {
  if (a.length() != b.length())
    fail(ErrorKind::InvalidParameter, "protein distance: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.length(); ++i)
    d += costs.cost(a.residues()[i], b.residues()[i]);
  return d;
}

DistanceFunction protein_distance_fn(SubstitutionCosts costs) {
  return [costs](const Value& a, const Value& b) {
    return protein_distance(as_protein(a), as_protein(b), costs);
  };
}

ElementId protein_from_base(ModelBuilder& b, const std::string& base) {
  for (char c : base) {
    if (c != '-' && !is_amino_acid(c))
      fail(ErrorKind::InvalidValue, std::string("base sequence: illegal character '") + c + "'");
  }
  std::vector<ElementId> wildcards;
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] != '-') continue;
    std::vector<std::pair<double, Value>> options;
    options.reserve(20);
    for (char aa : amino_acids())
      options.emplace_back(1.0 / 20.0, Value::text(std::string(1, aa)));
    wildcards.push_back(b.select(std::move(options)));
    positions.push_back(i);
  }
  return b.apply(
      wildcards,
      [base, positions](std::span<const Value> vs) {
        std::string out = base;
        for (std::size_t i = 0; i < positions.size(); ++i) out[positions[i]] = vs[i].as_text()[0];
        return protein_value(std::move(out));
      },
      "protein");
}

ElementId dna_from_protein(ModelBuilder& b, ElementId protein) {
  return b.chain(
      protein,
      [](const Value& p) {
        const std::string& residues = as_protein(p).residues();
        ModelBuilder f;
        std::vector<ElementId> picks;
        picks.reserve(residues.size());
        for (char aa : residues) {
          const auto& codons = codons_for(aa);
          std::vector<std::pair<double, Value>> options;
          options.reserve(codons.size());
          for (const std::string& codon : codons)
            options.emplace_back(1.0 / static_cast<double>(codons.size()), Value::text(codon));
          picks.push_back(f.select(std::move(options)));
        }
        ElementId root = f.apply(picks, [](std::span<const Value> vs) {
          std::string out;
          for (const Value& v : vs) out += v.as_text();
          return dna_value(std::move(out));
        });
        return ChainOutcome::fresh(std::move(f).build(), root);
      },
      {}, "dna");
}

namespace {

// Fragment drawing each site from the steps-step transition row.
ChainOutcome mutation_fragment(const std::string& dna, long long steps, const NucMatrix& m) {
  NucMatrix mt = matrix_power(m, steps);
  ModelBuilder f;
  std::vector<ElementId> sites;
  sites.reserve(dna.size());
  for (char c : dna) {
    const auto& row = mt[static_cast<std::size_t>(nucleotide_index(c))];
    std::vector<std::pair<double, Value>> options;
    for (int j = 0; j < 4; ++j) {
      if (row[static_cast<std::size_t>(j)] <= 0.0) continue;
      options.emplace_back(row[static_cast<std::size_t>(j)],
                           Value::text(std::string(1, nucleotide_at(j))));
    }
    sites.push_back(f.select(std::move(options)));
  }
  ElementId root = f.apply(sites, [](std::span<const Value> vs) {
    std::string out;
    out.reserve(vs.size());
    for (const Value& v : vs) out += v.as_text();
    return dna_value(std::move(out));
  });
  return ChainOutcome::fresh(std::move(f).build(), root);
}

}  // namespace

ElementId mutate(ModelBuilder& b, ElementId dna, long long steps, const NucMatrix& m) {
  if (steps < 0) fail(ErrorKind::InvalidParameter, "mutate: negative step count");
  validate_matrix(m);
  return b.chain(
      dna,
      [steps, m](const Value& d) { return mutation_fragment(as_dna(d).nucleotides(), steps, m); },
      {}, "mutated_dna");
}

ElementId mutate_timed(ModelBuilder& b, ElementId dna, ElementId steps_element,
                       const NucMatrix& m) {
  validate_matrix(m);
  ElementId pair = b.tuple_of({dna, steps_element});
  return b.chain(
      pair,
      [m](const Value& v) {
        const auto& parts = v.as_tuple();
        long long steps = parts[1].as_integer();
        if (steps < 0) fail(ErrorKind::InvalidParameter, "mutate: negative step count");
        return mutation_fragment(as_dna(parts[0]).nucleotides(), steps, m);
      },
      {}, "mutated_dna");
}

ElementId translate(ModelBuilder& b, ElementId dna) {
  return b.apply(
      {dna},
      [](std::span<const Value> vs) {
        return protein_value(translate_dna(as_dna(vs[0]).nucleotides()));
      },
      "translated");
}

}  // namespace decnet::genetics
