#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "decnet/value.hpp"

namespace decnet {

// One collected observation: utility u with sampling weight w, recorded for
// parent value t and decision value v.
struct Sample {
  Value parent;
  Value decision;
  double utility = 0.0;
  double weight = 0.0;
};

// Reversible single-token encoding for one family of parent or decision
// values. Encodings never contain tab or newline characters.
struct ValueCodec {
  std::string name;
  std::function<std::string(const Value&)> encode;
  std::function<Value(const std::string&)> decode;
};

class CodecRegistry {
 public:
  void add(ValueCodec codec);
  ValueCodec get(const std::string& name) const;
  bool has(const std::string& name) const;

  // bool, int, real, text, graph
  static CodecRegistry builtin();

 private:
  std::map<std::string, ValueCodec> codecs_;
};

// The statistic store behind every policy. Samples are kept individually,
// in insertion order, because the k-NN estimator needs each neighbor; exact
// policies aggregate on demand. Append during one sampling run, then seal;
// a sealed store is immutable and safe to share across threads.
class SampleStore {
 public:
  explicit SampleStore(std::vector<Value> decision_range);

  void append(Value t, Value v, double u, double w);
  void seal();
  bool sealed() const { return sealed_; }

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Value>& decision_range() const { return decision_range_; }

  // Position of v in the declared range; errors if v was never declared.
  std::size_t range_index_of(const Value& v) const;

  // Indices (into samples(), insertion order) of the samples whose decision
  // equals decision_range()[range_index].
  const std::vector<std::uint32_t>& partition(std::size_t range_index) const;

  double total_weight() const { return total_weight_; }

  // Multiplies every sample weight by c > 0.
  SampleStore scaled_weights(double c) const;

  // Line-oriented text: a header naming the codecs and the decision range,
  // then one sample per line as t<TAB>v<TAB>u<TAB>w.
  void save(std::ostream& out, const ValueCodec& parent_codec,
            const ValueCodec& decision_codec) const;
  static SampleStore load(std::istream& in, const CodecRegistry& registry);

 private:
  std::vector<Value> decision_range_;
  std::vector<Sample> samples_;
  std::vector<std::vector<std::uint32_t>> by_decision_;
  double total_weight_ = 0.0;
  bool sealed_ = false;
};

}  // namespace decnet
