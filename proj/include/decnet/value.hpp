#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "decnet/error.hpp"

namespace decnet {

class Value;

// Ordered list; compares elementwise, then by length.
struct Sequence {
  std::vector<Value> items;
};

// Fixed-arity product; compares componentwise. Distinct from Sequence so
// tuple-aware distance reduction can tell the two apart.
struct Tuple {
  std::vector<Value> items;
};

// Undirected graph with a designated start node. Edges are stored
// normalized (a < b, sorted, deduplicated) so equality is structural.
struct GraphValue {
  std::int32_t node_count = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::int32_t seed_node = 0;

  void normalize();
  void validate() const;  // no self loops, endpoints in range
  std::vector<int> degree_sequence_desc() const;

  bool operator==(const GraphValue& other) const {
    return node_count == other.node_count && seed_node == other.seed_node &&
           edges == other.edges;
  }
};

// Escape hatch for domain objects (protein sequences and the like).
// Implementations must give a decidable equality and an injective repr
// within their type_name.
class OpaqueObject {
 public:
  virtual ~OpaqueObject() = default;
  virtual std::string type_name() const = 0;
  virtual std::string repr() const = 0;
  virtual bool equals(const OpaqueObject& other) const = 0;
};

using OpaquePtr = std::shared_ptr<const OpaqueObject>;

// One model value. Every variant has decidable equality and a total order,
// which is what lets sample stores key on parent values of any type.
class Value {
 public:
  Value() : v_(false) {}

  static Value boolean(bool b) { return Value(Storage(b)); }
  static Value integer(std::int64_t i) { return Value(Storage(i)); }
  static Value real(double d);  // rejects NaN
  static Value text(std::string s) { return Value(Storage(std::move(s))); }
  static Value seq(std::vector<Value> items);
  static Value tuple(std::vector<Value> items);
  static Value graph(GraphValue g);
  static Value opaque(OpaquePtr o);

  bool is_boolean() const { return std::holds_alternative<bool>(v_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_real() const { return std::holds_alternative<double>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_seq() const { return std::holds_alternative<Sequence>(v_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(v_); }
  bool is_graph() const { return std::holds_alternative<GraphValue>(v_); }
  bool is_opaque() const { return std::holds_alternative<OpaquePtr>(v_); }

  bool as_boolean() const;
  std::int64_t as_integer() const;
  double as_real() const;           // integers widen to double
  double as_real_strict() const;    // reals only
  const std::string& as_text() const;
  const std::vector<Value>& as_seq() const;
  const std::vector<Value>& as_tuple() const;
  const GraphValue& as_graph() const;
  const OpaquePtr& as_opaque() const;

  template <typename T>
  std::shared_ptr<const T> as_opaque_as() const {
    auto p = std::dynamic_pointer_cast<const T>(as_opaque());
    if (!p) fail(ErrorKind::InvalidValue, "opaque value has unexpected concrete type");
    return p;
  }

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
  bool operator<(const Value& other) const { return compare(other) < 0; }

  // Total order: variant tag first, then payload. Opaque values order by
  // (type_name, repr).
  int compare(const Value& other) const;

  // Canonical, injective text form. Reals print with shortest round-trip
  // digits, so distinct doubles never collide.
  std::string repr() const;

  const char* type_name() const;

 private:
  using Storage = std::variant<bool, std::int64_t, double, std::string,
                               Sequence, Tuple, GraphValue, OpaquePtr>;
  explicit Value(Storage v) : v_(std::move(v)) {}
  Storage v_;
};

// Shortest text that parses back to exactly the same double.
std::string format_double(double d);
double parse_double(const std::string& s);

}  // namespace decnet
