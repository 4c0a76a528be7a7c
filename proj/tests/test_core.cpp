#include <doctest.h>

#include "decnet/evaluate.hpp"
#include "support/test_support.hpp"

using namespace decnet;

namespace {

bool fails_with(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("values compare and print canonically") {
  CHECK(Value::integer(5) == Value::integer(5));
  CHECK(Value::integer(5) != Value::real(5.0));  // distinct variants
  CHECK(Value::real(0.1).repr() == "r0.1");
  CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  Value t1 = Value::tuple({Value::real(1.0), Value::boolean(true)});
  Value t2 = Value::tuple({Value::real(1.0), Value::boolean(true)});
  Value t3 = Value::tuple({Value::real(1.0), Value::boolean(false)});
  CHECK(t1 == t2);
  CHECK(t1 != t3);
  CHECK(t1.repr() == t2.repr());

  CHECK(Value::seq({Value::integer(1)}) != Value::seq({Value::integer(1), Value::integer(1)}));
  CHECK(fails_with(ErrorKind::InvalidValue, [] { Value::real(std::nan("")); }));

  GraphValue g;
  g.node_count = 3;
  g.edges = {{2, 0}, {0, 1}, {0, 2}};
  Value gv = Value::graph(g);  // normalized: sorted, deduplicated
  CHECK(gv.as_graph().edges == std::vector<std::pair<std::int32_t, std::int32_t>>{{0, 1}, {0, 2}});
}

TEST_CASE("adding elements validates parameters and references") {
  ModelBuilder b;
  ElementId c = b.constant(Value::integer(5));
  CHECK(c == 0);
  CHECK(b.size() == 1);

  CHECK(fails_with(ErrorKind::InvalidParameter, [&] { b.flip(1.5); }));
  CHECK(fails_with(ErrorKind::InvalidParameter, [&] { b.uniform(2.0, 1.0); }));
  CHECK(fails_with(ErrorKind::InvalidParameter, [&] { b.gamma(0.0); }));
  CHECK(fails_with(ErrorKind::InvalidParameter, [&] {
    b.select({{0.5, Value::integer(0)}, {0.4, Value::integer(1)}});
  }));
  CHECK(fails_with(ErrorKind::InvalidParameter, [&] {
    b.decision(c, {Value::integer(0), Value::integer(0)});
  }));

  // Dangling parent reference; appending under increasing ids is what keeps
  // the graph acyclic.
  CHECK(fails_with(ErrorKind::UnknownParent, [&] {
    b.apply({ElementId{7}}, [](std::span<const Value> vs) { return vs[0]; });
  }));
}

TEST_CASE("deterministic worlds evaluate with weight one") {
  ModelBuilder b;
  b.constant(Value::integer(5));
  Model m = std::move(b).build();
  RandomSource rng(1);
  World w = evaluate(m, rng, std::map<ElementId, Value>{});
  CHECK(w.values[0] == Value::integer(5));
  CHECK(w.weight == 1.0);
}

TEST_CASE("if_ chains to the value of the selected branch") {
  ModelBuilder b;
  ElementId a = b.flip(1.0);
  ElementId two = b.constant(Value::integer(2));
  ElementId seven = b.constant(Value::integer(7));
  ElementId m = b.if_(a, two, seven);
  Model model = std::move(b).build();
  RandomSource rng(1);
  World w = evaluate(model, rng, std::map<ElementId, Value>{});
  CHECK(w.values[m] == Value::integer(2));
  CHECK(w.weight == 1.0);
}

namespace {

struct Mixture {
  Model model;
  ElementId n0, n1, mix_prob, mix;
};

Mixture normal_mixture(bool observe_true) {
  ModelBuilder b;
  Mixture out;
  out.n0 = b.normal(0.0, 1.0);
  out.n1 = b.normal(5.0, 2.0);
  out.mix_prob = b.flip(0.7);
  out.mix = b.if_(out.mix_prob, out.n0, out.n1);
  if (observe_true) b.observe(out.mix_prob, Value::boolean(true));
  out.model = std::move(b).build();
  return out;
}

}  // namespace

TEST_CASE("observed mixture follows the selected component") {
  Mixture mix = normal_mixture(true);
  std::vector<double> draws;
  for (int i = 0; i < 10000; ++i) {
    RandomSource rng(derive_stream(42, i));
    World w = evaluate(mix.model, rng, std::map<ElementId, Value>{});
    CHECK(w.weight == doctest::Approx(0.7));
    draws.push_back(w.values[mix.mix].as_real());
  }
  // Component 0 has mean 0 and unit variance: 3 standard errors.
  CHECK(std::abs(testsupport::mean(draws)) < 3.0 / std::sqrt(10000.0));
}

TEST_CASE("apply values recompute from parent assignments") {
  Mixture mix = normal_mixture(false);
  ModelBuilder b;
  ElementId x = b.uniform(0.0, 1.0);
  ElementId y = b.geometric(0.5);
  ElementId s = b.apply({x, y}, [](std::span<const Value> vs) {
    return Value::real(vs[0].as_real() + 3.0 * static_cast<double>(vs[1].as_integer()));
  });
  Model m = std::move(b).build();
  for (int i = 0; i < 200; ++i) {
    RandomSource rng(derive_stream(7, i));
    World w = evaluate(m, rng, std::map<ElementId, Value>{});
    CHECK(w.values[s].as_real() ==
          w.values[x].as_real() + 3.0 * static_cast<double>(w.values[y].as_integer()));
    CHECK(w.weight == 1.0);  // no evidence, no decisions
  }
}

TEST_CASE("evaluation is deterministic under a fixed seed") {
  Mixture mix = normal_mixture(false);
  RandomSource r1(99), r2(99);
  World w1 = evaluate(mix.model, r1, std::map<ElementId, Value>{});
  World w2 = evaluate(mix.model, r2, std::map<ElementId, Value>{});
  REQUIRE(w1.values.size() == w2.values.size());
  for (std::size_t i = 0; i < w1.values.size(); ++i) CHECK(w1.values[i] == w2.values[i]);
  REQUIRE(w1.dynamic.size() == w2.dynamic.size());
  for (std::size_t i = 0; i < w1.dynamic.size(); ++i) {
    CHECK(w1.dynamic[i].first == w2.dynamic[i].first);
    CHECK(w1.dynamic[i].second == w2.dynamic[i].second);
  }
}

TEST_CASE("decisions demand a value from their declared range") {
  ModelBuilder b;
  ElementId parent = b.constant(Value::text("x"));
  ElementId dec = b.decision(parent, {Value::integer(0), Value::integer(1)});
  Model m = std::move(b).build();
  RandomSource rng(1);

  CHECK(fails_with(ErrorKind::MissingDecision,
                   [&] { evaluate(m, rng, std::map<ElementId, Value>{}); }));
  CHECK(fails_with(ErrorKind::DecisionOutOfRange, [&] {
    evaluate(m, rng, std::map<ElementId, Value>{{dec, Value::integer(9)}});
  }));

  World w = evaluate(m, rng, std::map<ElementId, Value>{{dec, Value::integer(1)}});
  CHECK(w.values[dec] == Value::integer(1));
  CHECK(w.weight == 1.0);
}

TEST_CASE("chain failures carry the offending element") {
  ModelBuilder b;
  ElementId x = b.constant(Value::integer(1));
  ElementId c = b.chain(x, [](const Value&) -> ChainOutcome {
    throw std::runtime_error("boom");
  });
  Model m = std::move(b).build();
  RandomSource rng(1);
  try {
    evaluate(m, rng, std::map<ElementId, Value>{});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EvalFailure);
    CHECK(std::string(e.what()).find(std::to_string(c)) != std::string::npos);
  }
}

TEST_CASE("worlds record chain fragment assignments") {
  ModelBuilder b;
  ElementId x = b.uniform(1.0, 2.0);
  ElementId g = b.chain(x, [](const Value& t) {
    ModelBuilder f;
    ElementId root = f.gamma(t.as_real());
    return ChainOutcome::fresh(std::move(f).build(), root);
  });
  Model m = std::move(b).build();
  RandomSource rng(5);
  World w = evaluate(m, rng, std::map<ElementId, Value>{});
  REQUIRE(w.dynamic.size() == 1);
  CHECK(w.dynamic[0].first == std::to_string(g) + "/0");
  CHECK(w.dynamic[0].second == w.values[g]);
}

TEST_CASE("evidence on continuous elements weights by density") {
  // Normal's second parameter is the variance.
  ModelBuilder b;
  ElementId x = b.normal(1.0, 4.0);
  b.observe(x, Value::real(2.0));
  Model m = std::move(b).build();
  RandomSource rng(9);
  World w = evaluate(m, rng, std::map<ElementId, Value>{});
  const double expect = std::exp(-0.25 / 2.0) / std::sqrt(2.0 * M_PI * 4.0);
  CHECK(w.values[x] == Value::real(2.0));
  CHECK(w.weight == doctest::Approx(expect));
}

TEST_CASE("evidence on a chain forces the fragment root") {
  ModelBuilder b;
  ElementId x = b.constant(Value::real(2.0));
  ElementId g = b.chain(x, [](const Value& t) {
    ModelBuilder f;
    ElementId root = f.gamma(t.as_real());
    return ChainOutcome::fresh(std::move(f).build(), root);
  });
  b.observe(g, Value::real(1.5));
  Model m = std::move(b).build();
  RandomSource rng(10);
  World w = evaluate(m, rng, std::map<ElementId, Value>{});
  CHECK(w.values[g] == Value::real(1.5));
  // Gamma(shape 2, rate 1) density at 1.5.
  CHECK(w.weight == doctest::Approx(1.5 * std::exp(-1.5)));
}
