#include "decnet/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace decnet {

void GraphValue::normalize() {
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void GraphValue::validate() const {
  if (node_count < 0) fail(ErrorKind::InvalidValue, "graph: negative node count");
  if (seed_node < 0 || (node_count > 0 && seed_node >= node_count))
    fail(ErrorKind::InvalidValue, "graph: seed node out of range");
  for (const auto& [a, b] : edges) {
    if (a == b) fail(ErrorKind::InvalidValue, "graph: self loop");
    if (a < 0 || b < 0 || a >= node_count || b >= node_count)
      fail(ErrorKind::InvalidValue, "graph: edge endpoint out of range");
  }
}

std::vector<int> GraphValue::degree_sequence_desc() const {
  std::vector<int> deg(static_cast<std::size_t>(node_count), 0);
  for (const auto& [a, b] : edges) {
    ++deg[static_cast<std::size_t>(a)];
    ++deg[static_cast<std::size_t>(b)];
  }
  std::sort(deg.begin(), deg.end(), std::greater<int>());
  return deg;
}

Value Value::real(double d) {
  if (std::isnan(d)) fail(ErrorKind::InvalidValue, "real value may not be NaN");
  return Value(Storage(d));
}

Value Value::seq(std::vector<Value> items) { return Value(Storage(Sequence{std::move(items)})); }

Value Value::tuple(std::vector<Value> items) { return Value(Storage(Tuple{std::move(items)})); }

Value Value::graph(GraphValue g) {
  g.normalize();
  g.validate();
  return Value(Storage(std::move(g)));
}

Value Value::opaque(OpaquePtr o) {
  if (!o) fail(ErrorKind::InvalidValue, "opaque value may not be null");
  return Value(Storage(std::move(o)));
}

bool Value::as_boolean() const {
  if (const bool* b = std::get_if<bool>(&v_)) return *b;
  fail(ErrorKind::InvalidValue, std::string("expected boolean, got ") + type_name());
}

std::int64_t Value::as_integer() const {
  if (const auto* i = std::get_if<std::int64_t>(&v_)) return *i;
  fail(ErrorKind::InvalidValue, std::string("expected integer, got ") + type_name());
}

double Value::as_real() const {
  if (const auto* d = std::get_if<double>(&v_)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*i);
  fail(ErrorKind::InvalidValue, std::string("expected real, got ") + type_name());
}

double Value::as_real_strict() const {
  if (const auto* d = std::get_if<double>(&v_)) return *d;
  fail(ErrorKind::InvalidValue, std::string("expected real, got ") + type_name());
}

const std::string& Value::as_text() const {
  if (const auto* s = std::get_if<std::string>(&v_)) return *s;
  fail(ErrorKind::InvalidValue, std::string("expected text, got ") + type_name());
}

const std::vector<Value>& Value::as_seq() const {
  if (const auto* s = std::get_if<Sequence>(&v_)) return s->items;
  fail(ErrorKind::InvalidValue, std::string("expected sequence, got ") + type_name());
}

const std::vector<Value>& Value::as_tuple() const {
  if (const auto* t = std::get_if<Tuple>(&v_)) return t->items;
  fail(ErrorKind::InvalidValue, std::string("expected tuple, got ") + type_name());
}

const GraphValue& Value::as_graph() const {
  if (const auto* g = std::get_if<GraphValue>(&v_)) return *g;
  fail(ErrorKind::InvalidValue, std::string("expected graph, got ") + type_name());
}

const OpaquePtr& Value::as_opaque() const {
  if (const auto* o = std::get_if<OpaquePtr>(&v_)) return *o;
  fail(ErrorKind::InvalidValue, std::string("expected opaque value, got ") + type_name());
}

namespace {

int compare_lists(const std::vector<Value>& a, const std::vector<Value>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = a[i].compare(b[i]);
    if (c != 0) return c;
  }
  if (a.size() < b.size()) return -1;
  if (a.size() > b.size()) return 1;
  return 0;
}

template <typename T>
int scalar_compare(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

}  // namespace

bool Value::operator==(const Value& other) const { return compare(other) == 0; }

int Value::compare(const Value& other) const {
  if (v_.index() != other.v_.index())
    return v_.index() < other.v_.index() ? -1 : 1;
  switch (v_.index()) {
    case 0: return scalar_compare(std::get<bool>(v_), std::get<bool>(other.v_));
    case 1: return scalar_compare(std::get<std::int64_t>(v_), std::get<std::int64_t>(other.v_));
    case 2: return scalar_compare(std::get<double>(v_), std::get<double>(other.v_));
    case 3: return scalar_compare(std::get<std::string>(v_), std::get<std::string>(other.v_));
    case 4: return compare_lists(std::get<Sequence>(v_).items, std::get<Sequence>(other.v_).items);
    case 5: return compare_lists(std::get<Tuple>(v_).items, std::get<Tuple>(other.v_).items);
    case 6: {
      const auto& g1 = std::get<GraphValue>(v_);
      const auto& g2 = std::get<GraphValue>(other.v_);
      if (int c = scalar_compare(g1.node_count, g2.node_count)) return c;
      if (int c = scalar_compare(g1.seed_node, g2.seed_node)) return c;
      return scalar_compare(g1.edges, g2.edges);
    }
    case 7: {
      const auto& o1 = std::get<OpaquePtr>(v_);
      const auto& o2 = std::get<OpaquePtr>(other.v_);
      if (o1.get() == o2.get()) return 0;
      if (int c = scalar_compare(o1->type_name(), o2->type_name())) return c;
      if (o1->equals(*o2)) return 0;
      return scalar_compare(o1->repr(), o2->repr());
    }
  }
  return 0;
}

namespace {

std::string escape_text(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string repr_list(const char* tag, const std::vector<Value>& items) {
  std::string out(tag);
  out += '[';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i].repr();
  }
  out += ']';
  return out;
}

}  // namespace

std::string graph_repr(const GraphValue& g) {
  std::string out = std::to_string(g.node_count);
  if (g.seed_node != 0) {
    out += '@';
    out += std::to_string(g.seed_node);
  }
  out += ';';
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(g.edges[i].first);
    out += '-';
    out += std::to_string(g.edges[i].second);
  }
  return out;
}

std::string Value::repr() const {
  switch (v_.index()) {
    case 0: return std::get<bool>(v_) ? "true" : "false";
    case 1: return "i" + std::to_string(std::get<std::int64_t>(v_));
    case 2: return "r" + format_double(std::get<double>(v_));
    case 3: return "s\"" + escape_text(std::get<std::string>(v_)) + '"';
    case 4: return repr_list("q", std::get<Sequence>(v_).items);
    case 5: return repr_list("t", std::get<Tuple>(v_).items);
    case 6: return "g" + graph_repr(std::get<GraphValue>(v_));
    case 7: {
      const auto& o = std::get<OpaquePtr>(v_);
      return "o" + o->type_name() + ":" + o->repr();
    }
  }
  return "?";
}

const char* Value::type_name() const {
  switch (v_.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "real";
    case 3: return "text";
    case 4: return "sequence";
    case 5: return "tuple";
    case 6: return "graph";
    case 7: return "opaque";
  }
  return "?";
}

std::string format_double(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double d = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), d);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::CodecFailure, "malformed real: " + s);
  return d;
}

}  // namespace decnet
