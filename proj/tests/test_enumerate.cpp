#include <doctest.h>

#include <map>

#include "decnet/enumerate.hpp"

using namespace decnet;

TEST_CASE("single coin enumerates to its two outcomes") {
  ModelBuilder b;
  ElementId a = b.flip(0.3);
  Model m = std::move(b).build();
  auto worlds = exact_enumerate(m);
  REQUIRE(worlds.size() == 2);
  std::map<bool, double> probs;
  for (const auto& w : worlds) probs[w.values[a].as_boolean()] = w.probability;
  CHECK(probs[true] == doctest::Approx(0.3));
  CHECK(probs[false] == doctest::Approx(0.7));
}

TEST_CASE("chained coins marginalize through the branch") {
  ModelBuilder b;
  ElementId a = b.flip(0.5);
  ElementId f1 = b.flip(0.9);
  ElementId f2 = b.flip(0.1);
  ElementId m_id = b.if_(a, f1, f2);
  Model m = std::move(b).build();
  auto worlds = exact_enumerate(m);
  double p_true = 0.0, total = 0.0;
  for (const auto& w : worlds) {
    total += w.probability;
    if (w.values[m_id].as_boolean()) p_true += w.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p_true == doctest::Approx(0.5));
}

TEST_CASE("continuous and unbounded elements refuse enumeration") {
  {
    ModelBuilder b;
    b.uniform(0.0, 1.0);
    Model m = std::move(b).build();
    try {
      exact_enumerate(m);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotEnumerable);
      CHECK(std::string(e.what()).find("element 0") != std::string::npos);
    }
  }
  {
    ModelBuilder b;
    b.geometric(0.9);
    Model m = std::move(b).build();
    CHECK_THROWS_AS(exact_enumerate(m), Error);
  }
}

TEST_CASE("evidence renormalizes enumeration") {
  ModelBuilder b;
  ElementId a = b.flip(0.5);
  ElementId f1 = b.flip(0.9);
  ElementId f2 = b.flip(0.1);
  ElementId m_id = b.if_(a, f1, f2);
  b.observe(m_id, Value::boolean(true));
  Model m = std::move(b).build();
  double total = 0.0, p_a = 0.0;
  for (const auto& w : exact_enumerate(m)) {
    total += w.probability;
    if (w.values[a].as_boolean()) p_a += w.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p_a == doctest::Approx(0.9));
}

TEST_CASE("constant utility gives a constant oracle") {
  ModelBuilder b;
  ElementId parent = b.flip(0.5);
  ElementId dec = b.decision(parent, {Value::integer(0), Value::integer(1)});
  ElementId util = b.constant(Value::real(4.0));
  b.designate_utility(util);
  (void)dec;
  Model m = std::move(b).build();
  for (bool t : {false, true}) {
    for (int v : {0, 1}) {
      CHECK(expected_utility_oracle(m, dec, Value::boolean(t), Value::integer(v)) ==
            doctest::Approx(4.0));
    }
  }
}

TEST_CASE("oracle reports when no route applies") {
  ModelBuilder b;
  ElementId parent = b.uniform(0.0, 1.0);
  ElementId noise = b.normal(0.0, 1.0);
  ElementId dec = b.decision(parent, {Value::integer(0), Value::integer(1)});
  ElementId util = b.apply({noise}, [](std::span<const Value> vs) { return vs[0]; });
  b.designate_utility(util);
  (void)dec;
  Model m = std::move(b).build();
  try {
    expected_utility_oracle(m, dec, Value::real(0.5), Value::integer(0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OracleUnavailable);
  }
}

TEST_CASE("oracle conditions on the clamped parent") {
  // parent ~ Flip(0.5); utility = 1 when decision matches the parent.
  ModelBuilder b;
  ElementId parent = b.flip(0.5);
  ElementId dec = b.decision(parent, {Value::integer(0), Value::integer(1)});
  ElementId util = b.apply({parent, dec}, [](std::span<const Value> vs) {
    const int want = vs[0].as_boolean() ? 1 : 0;
    return Value::real(vs[1].as_integer() == want ? 1.0 : 0.0);
  });
  b.designate_utility(util);
  Model m = std::move(b).build();
  CHECK(expected_utility_oracle(m, dec, Value::boolean(true), Value::integer(1)) ==
        doctest::Approx(1.0));
  CHECK(expected_utility_oracle(m, dec, Value::boolean(true), Value::integer(0)) ==
        doctest::Approx(0.0));
  CHECK(expected_utility_oracle(m, dec, Value::boolean(false), Value::integer(0)) ==
        doctest::Approx(1.0));
}
