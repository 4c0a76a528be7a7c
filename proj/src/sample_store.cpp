#include "decnet/sample_store.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace decnet {

void CodecRegistry::add(ValueCodec codec) {
  codecs_.insert_or_assign(codec.name, std::move(codec));
}

ValueCodec CodecRegistry::get(const std::string& name) const {
  auto it = codecs_.find(name);
  if (it == codecs_.end()) fail(ErrorKind::CodecFailure, "unknown codec: " + name);
  return it->second;
}

bool CodecRegistry::has(const std::string& name) const { return codecs_.count(name) > 0; }

namespace {

std::string escape_token(const std::string& s) {
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

std::string unescape_token(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: fail(ErrorKind::CodecFailure, "bad escape in token: " + s);
    }
  }
  return out;
}

GraphValue parse_graph_repr(const std::string& s) {
  GraphValue g;
  auto semi = s.find(';');
  if (semi == std::string::npos) fail(ErrorKind::CodecFailure, "malformed graph: " + s);
  std::string head = s.substr(0, semi);
  auto at = head.find('@');
  try {
    if (at == std::string::npos) {
      g.node_count = std::stoi(head);
    } else {
      g.node_count = std::stoi(head.substr(0, at));
      g.seed_node = std::stoi(head.substr(at + 1));
    }
    std::string rest = s.substr(semi + 1);
    std::stringstream ss(rest);
    std::string edge;
    while (std::getline(ss, edge, ',')) {
      if (edge.empty()) continue;
      auto dash = edge.find('-');
      if (dash == std::string::npos) fail(ErrorKind::CodecFailure, "malformed edge: " + edge);
      g.edges.emplace_back(std::stoi(edge.substr(0, dash)), std::stoi(edge.substr(dash + 1)));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::CodecFailure, "malformed graph: " + s);
  }
  return g;
}

}  // namespace

std::string graph_repr(const GraphValue& g);  // value.cpp

CodecRegistry CodecRegistry::builtin() {
  CodecRegistry reg;
  reg.add(ValueCodec{
      "bool",
      [](const Value& v) { return v.as_boolean() ? std::string("true") : std::string("false"); },
      [](const std::string& s) {
        if (s == "true") return Value::boolean(true);
        if (s == "false") return Value::boolean(false);
        fail(ErrorKind::CodecFailure, "malformed bool: " + s);
      }});
  reg.add(ValueCodec{"int",
                     [](const Value& v) { return std::to_string(v.as_integer()); },
                     [](const std::string& s) {
                       try {
                         return Value::integer(std::stoll(s));
                       } catch (const std::exception&) {
                         fail(ErrorKind::CodecFailure, "malformed int: " + s);
                       }
                     }});
  reg.add(ValueCodec{"real",
                     [](const Value& v) { return format_double(v.as_real_strict()); },
                     [](const std::string& s) { return Value::real(parse_double(s)); }});
  reg.add(ValueCodec{"text",
                     [](const Value& v) { return escape_token(v.as_text()); },
                     [](const std::string& s) { return Value::text(unescape_token(s)); }});
  reg.add(ValueCodec{"graph",
                     [](const Value& v) { return graph_repr(v.as_graph()); },
                     [](const std::string& s) { return Value::graph(parse_graph_repr(s)); }});
  return reg;
}

SampleStore::SampleStore(std::vector<Value> decision_range)
    : decision_range_(std::move(decision_range)) {
  if (decision_range_.empty())
    fail(ErrorKind::InvalidParameter, "sample store needs a nonempty decision range");
  by_decision_.resize(decision_range_.size());
}

std::size_t SampleStore::range_index_of(const Value& v) const {
  for (std::size_t i = 0; i < decision_range_.size(); ++i)
    if (decision_range_[i] == v) return i;
  fail(ErrorKind::InvalidParameter,
       "decision value " + v.repr() + " is not in the store's declared range");
}

void SampleStore::append(Value t, Value v, double u, double w) {
  if (sealed_) fail(ErrorKind::InvalidParameter, "sample store is sealed");
  if (!std::isfinite(u)) fail(ErrorKind::InvalidValue, "utility must be finite");
  if (!(w >= 0.0) || !std::isfinite(w))
    fail(ErrorKind::InvalidValue, "sample weight must be finite and nonnegative");
  std::size_t ri = range_index_of(v);
  by_decision_[ri].push_back(static_cast<std::uint32_t>(samples_.size()));
  total_weight_ += w;
  samples_.push_back(Sample{std::move(t), std::move(v), u, w});
}

void SampleStore::seal() {
  if (samples_.empty()) fail(ErrorKind::EmptyStore, "sample store has no samples");
  if (!(total_weight_ > 0.0))
    fail(ErrorKind::DegenerateEvidence, "sample store carries zero total weight");
  sealed_ = true;
}

const std::vector<std::uint32_t>& SampleStore::partition(std::size_t range_index) const {
  return by_decision_.at(range_index);
}

SampleStore SampleStore::scaled_weights(double c) const {
  if (!(c > 0.0)) fail(ErrorKind::InvalidParameter, "weight scale must be positive");
  SampleStore out(decision_range_);
  for (const Sample& s : samples_) out.append(s.parent, s.decision, s.utility, s.weight * c);
  if (sealed_) out.seal();
  return out;
}

void SampleStore::save(std::ostream& out, const ValueCodec& parent_codec,
                       const ValueCodec& decision_codec) const {
  out << "#delta\tv=1\tparent=" << parent_codec.name << "\tdecision=" << decision_codec.name
      << "\trange=" << decision_range_.size();
  for (const Value& v : decision_range_) out << '\t' << decision_codec.encode(v);
  out << '\n';
  for (const Sample& s : samples_) {
    out << parent_codec.encode(s.parent) << '\t' << decision_codec.encode(s.decision) << '\t'
        << format_double(s.utility) << '\t' << format_double(s.weight) << '\n';
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string field_value(const std::string& field, const char* key) {
  std::string prefix = std::string(key) + "=";
  if (field.rfind(prefix, 0) != 0)
    fail(ErrorKind::CodecFailure, "sample store header: expected " + prefix + "..., got " + field);
  return field.substr(prefix.size());
}

}  // namespace

SampleStore SampleStore::load(std::istream& in, const CodecRegistry& registry) {
  std::string header;
  if (!std::getline(in, header))
    fail(ErrorKind::CodecFailure, "sample store stream is empty");
  auto fields = split_tabs(header);
  if (fields.size() < 5 || fields[0] != "#delta")
    fail(ErrorKind::CodecFailure, "sample store header is malformed");
  if (field_value(fields[1], "v") != "1")
    fail(ErrorKind::CodecFailure, "unsupported sample store version");
  const ValueCodec parent_codec = registry.get(field_value(fields[2], "parent"));
  const ValueCodec decision_codec = registry.get(field_value(fields[3], "decision"));
  std::size_t range_n = 0;
  try {
    range_n = std::stoul(field_value(fields[4], "range"));
  } catch (const std::exception&) {
    fail(ErrorKind::CodecFailure, "malformed range count");
  }
  if (fields.size() != 5 + range_n)
    fail(ErrorKind::CodecFailure, "range count does not match header entries");
  std::vector<Value> range;
  range.reserve(range_n);
  for (std::size_t i = 0; i < range_n; ++i) range.push_back(decision_codec.decode(fields[5 + i]));

  SampleStore store(std::move(range));
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 4)
      fail(ErrorKind::CodecFailure,
           "line " + std::to_string(line_no) + ": expected 4 tab-separated fields");
    store.append(parent_codec.decode(cols[0]), decision_codec.decode(cols[1]),
                 parse_double(cols[2]), parse_double(cols[3]));
  }
  store.seal();
  return store;
}

}  // namespace decnet
