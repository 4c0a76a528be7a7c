#include <doctest.h>

#include <sstream>

#include "decnet/policy.hpp"
#include "decnet/zoo/zoo.hpp"
#include "support/test_support.hpp"

using namespace decnet;

namespace {

SampleStore make_store(std::vector<Value> range,
                       std::vector<std::tuple<Value, Value, double, double>> rows) {
  SampleStore store(std::move(range));
  for (auto& [t, v, u, w] : rows) store.append(std::move(t), std::move(v), u, w);
  store.seal();
  return store;
}

std::vector<Value> int_range(int n) {
  std::vector<Value> out;
  for (int i = 0; i < n; ++i) out.push_back(Value::integer(i));
  return out;
}

}  // namespace

TEST_CASE("store validates decisions and weights") {
  SampleStore store(int_range(2));
  CHECK_THROWS_AS(store.append(Value::text("t"), Value::integer(7), 1.0, 1.0), Error);
  CHECK_THROWS_AS(store.append(Value::text("t"), Value::integer(0), 1.0, -1.0), Error);
  CHECK_THROWS_AS(store.seal(), Error);  // empty
  store.append(Value::text("t"), Value::integer(0), 1.0, 0.0);
  CHECK_THROWS_AS(store.seal(), Error);  // zero total weight
  store.append(Value::text("t"), Value::integer(1), 1.0, 0.5);
  store.seal();
  CHECK(store.partition(0).size() == 1);
  CHECK(store.partition(1).size() == 1);
}

TEST_CASE("collected samples carry parent, exploration value, utility and weight") {
  ModelBuilder b;
  ElementId parent = b.constant(Value::text("x"));
  ElementId dec = b.decision(parent, int_range(2));
  ElementId util = b.apply({dec}, [](std::span<const Value> vs) {
    return Value::real(static_cast<double>(vs[0].as_integer()));
  });
  b.designate_utility(util);
  Model m = std::move(b).build();

  SamplerConfig cfg{SampleMethod::Forward, 100, {}, 17};
  SampleStore store = collect_samples(m, dec, std::vector<ElementId>{util}, cfg);
  REQUIRE(store.size() == 100);
  for (const Sample& s : store.samples()) {
    CHECK(s.parent == Value::text("x"));
    CHECK((s.utility == 0.0 || s.utility == 1.0));
    CHECK(s.utility == static_cast<double>(s.decision.as_integer()));
    CHECK(s.weight == 1.0);
  }
  // Uniform exploration visits both values.
  CHECK(store.partition(0).size() > 20);
  CHECK(store.partition(1).size() > 20);

  CHECK_THROWS_AS(collect_samples(m, dec, std::vector<ElementId>{}, cfg), Error);
  CHECK_THROWS_AS(collect_samples(m, util, std::vector<ElementId>{util}, cfg), Error);
}

TEST_CASE("exact collection stores one aggregated entry per pair") {
  ModelBuilder b;
  ElementId parent = b.flip(0.3);
  ElementId dec = b.decision(parent, int_range(2));
  ElementId util = b.apply({parent, dec}, [](std::span<const Value> vs) {
    return Value::real(vs[0].as_boolean() == (vs[1].as_integer() == 1) ? 1.0 : 0.0);
  });
  b.designate_utility(util);
  Model m = std::move(b).build();

  SampleStore store = collect_samples_exact(m, dec, std::vector<ElementId>{util});
  CHECK(store.size() == 4);  // two parents x two decisions
  for (const Sample& s : store.samples()) {
    const double expect_p = s.parent.as_boolean() ? 0.3 : 0.7;
    CHECK(s.weight == doctest::Approx(expect_p));
    const double expect_u =
        (s.parent.as_boolean() == (s.decision.as_integer() == 1)) ? 1.0 : 0.0;
    CHECK(s.utility == doctest::Approx(expect_u));
  }

  ExactPolicy policy = ExactPolicy::compile(store);
  CHECK(policy.decide(Value::boolean(true)) == Value::integer(1));
  CHECK(policy.decide(Value::boolean(false)) == Value::integer(0));
}

TEST_CASE("exact policy picks the weighted-mean argmax") {
  Value red = Value::text("red");
  SUBCASE("larger utility wins") {
    auto store = make_store(int_range(2), {{red, Value::integer(0), 1.0, 1.0},
                                           {red, Value::integer(1), 2.0, 1.0}});
    CHECK(ExactPolicy::compile(store).decide(red) == Value::integer(1));
  }
  SUBCASE("weighted means, not raw sums") {
    Value t = Value::text("t");
    auto store = make_store(int_range(2), {{t, Value::integer(0), 1.0, 1.0},
                                           {t, Value::integer(0), 3.0, 1.0},
                                           {t, Value::integer(1), 10.0, 0.1},
                                           {t, Value::integer(1), 0.0, 0.9}});
    // means: 2.0 versus 1.0
    CHECK(ExactPolicy::compile(store).decide(t) == Value::integer(0));
  }
  SUBCASE("ties go to the earliest range value") {
    Value t = Value::text("t");
    auto store = make_store(int_range(2), {{t, Value::integer(0), 5.0, 1.0},
                                           {t, Value::integer(1), 5.0, 1.0}});
    CHECK(ExactPolicy::compile(store).decide(t) == Value::integer(0));
  }
  SUBCASE("unknown parents raise") {
    auto store = make_store(int_range(2), {{red, Value::integer(0), 1.0, 1.0}});
    try {
      ExactPolicy::compile(store).decide(Value::text("blue"));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownParentValue);
    }
  }
}

TEST_CASE("knn expected utility averages the nearest neighbors") {
  auto store = std::make_shared<const SampleStore>(
      make_store(int_range(1), {{Value::real(1.0), Value::integer(0), 10.0, 1.0},
                                {Value::real(2.0), Value::integer(0), 20.0, 1.0},
                                {Value::real(3.0), Value::integer(0), 30.0, 1.0}}));
  ApproxPolicyConfig cfg;
  cfg.index = IndexKind::Linear;
  ApproxPolicy policy(store, absolute_distance(), cfg);
  const MetricIndex& index = policy.index_for(Value::integer(0));

  CHECK(knn_expected_utility(*store, Value::integer(0), Value::real(1.1), 2, index) ==
        doctest::Approx(15.0));
  CHECK(knn_expected_utility(*store, Value::integer(0), Value::real(1.1), 3, index) ==
        doctest::Approx(20.0));

  std::uint64_t clamps = 0;
  CHECK(knn_expected_utility(*store, Value::integer(0), Value::real(1.1), 9, index, &clamps) ==
        doctest::Approx(20.0));
  CHECK(clamps == 1);  // k beyond the partition clamps with a diagnostic
}

TEST_CASE("knn respects sampling weights at equal distance") {
  auto store = std::make_shared<const SampleStore>(
      make_store(int_range(1), {{Value::real(0.0), Value::integer(0), 10.0, 3.0},
                                {Value::real(0.0), Value::integer(0), 20.0, 1.0}}));
  ApproxPolicyConfig cfg;
  cfg.k = 2;
  ApproxPolicy policy(store, absolute_distance(), cfg);
  CHECK(*policy.expected_utility(Value::real(0.0), Value::integer(0)) ==
        doctest::Approx(12.5));
}

TEST_CASE("zero-weight partitions are excluded and flagged") {
  auto store = std::make_shared<const SampleStore>(
      make_store(int_range(2), {{Value::real(0.0), Value::integer(0), 10.0, 0.0},
                                {Value::real(0.0), Value::integer(1), -5.0, 1.0}}));
  ApproxPolicyConfig cfg;
  cfg.k = 1;
  ApproxPolicy policy(store, absolute_distance(), cfg);
  // decision 0 has only zero-weight support, so 1 wins despite lower utility
  CHECK(policy.decide(Value::real(0.0)) == Value::integer(1));
  CHECK(!policy.expected_utility(Value::real(0.0), Value::integer(0)).has_value());
  CHECK(policy.flagged_queries() == 0);
}

TEST_CASE("all-excluded queries fall back to the tie rule and are flagged") {
  auto store = std::make_shared<const SampleStore>(
      make_store(int_range(2), {{Value::real(0.0), Value::integer(0), 10.0, 0.0},
                                {Value::real(0.0), Value::integer(1), -5.0, 0.0},
                                {Value::real(9.0), Value::integer(1), 1.0, 1.0}}));
  ApproxPolicyConfig cfg;
  cfg.k = 1;
  ApproxPolicy policy(store, absolute_distance(), cfg);
  // At t=0 the k=1 neighbor of each partition carries zero weight.
  CHECK(policy.decide(Value::real(0.0)) == Value::integer(0));
  CHECK(policy.flagged_queries() == 1);
}

TEST_CASE("weight scaling never changes chosen decisions") {
  RandomSource rng(77);
  for (double scale : {0.25, 0.5, 2.0, 3.0, 1024.0}) {
    SampleStore store(int_range(3));
    for (int i = 0; i < 300; ++i) {
      store.append(Value::real(rng.uniform(0.0, 10.0)),
                   Value::integer(static_cast<std::int64_t>(rng.uniform_index(3))),
                   rng.normal(0.0, 4.0), 0.05 + rng.uniform01());
    }
    store.seal();
    SampleStore scaled = store.scaled_weights(scale);

    ExactPolicy e1 = ExactPolicy::compile(store);
    ExactPolicy e2 = ExactPolicy::compile(scaled);
    auto s1 = std::make_shared<const SampleStore>(std::move(store));
    auto s2 = std::make_shared<const SampleStore>(std::move(scaled));
    ApproxPolicyConfig cfg;
    cfg.k = 7;
    ApproxPolicy a1(s1, absolute_distance(), cfg);
    ApproxPolicy a2(s2, absolute_distance(), cfg);
    for (int q = 0; q < 100; ++q) {
      Value t = Value::real(rng.uniform(0.0, 10.0));
      CHECK(a1.decide(t) == a2.decide(t));
    }
    for (const Sample& s : s1->samples()) CHECK(e1.decide(s.parent) == e2.decide(s.parent));
  }
}

TEST_CASE("with k covering the store the ranking is the global weighted mean") {
  RandomSource rng(88);
  SampleStore store(int_range(3));
  for (int i = 0; i < 200; ++i) {
    store.append(Value::real(rng.uniform(0.0, 1.0)),
                 Value::integer(static_cast<std::int64_t>(rng.uniform_index(3))),
                 rng.normal(0.0, 1.0), 0.1 + rng.uniform01());
  }
  store.seal();

  std::vector<double> global(3, 0.0), wsum(3, 0.0);
  for (const Sample& s : store.samples()) {
    const auto vi = static_cast<std::size_t>(s.decision.as_integer());
    global[vi] += s.utility * s.weight;
    wsum[vi] += s.weight;
  }
  std::size_t best = 0;
  for (std::size_t vi = 1; vi < 3; ++vi)
    if (global[vi] / wsum[vi] > global[best] / wsum[best]) best = vi;

  auto shared = std::make_shared<const SampleStore>(std::move(store));
  ApproxPolicyConfig cfg;
  cfg.k = 1000;  // covers every partition
  ApproxPolicy policy(shared, absolute_distance(), cfg);
  for (int q = 0; q < 50; ++q) {
    Value t = Value::real(rng.uniform(0.0, 1.0));
    CHECK(policy.decide(t) == Value::integer(static_cast<std::int64_t>(best)));
  }
}

TEST_CASE("store serialization round-trips losslessly") {
  CodecRegistry reg = zoo::codec_registry();

  SUBCASE("real parents") {
    RandomSource rng(3);
    SampleStore store(int_range(2));
    for (int i = 0; i < 50; ++i)
      store.append(Value::real(rng.normal(0.0, 1.0)),
                   Value::integer(static_cast<std::int64_t>(rng.uniform_index(2))),
                   rng.normal(0.0, 1.0), rng.uniform01());
    store.seal();
    std::stringstream ss;
    store.save(ss, reg.get("real"), reg.get("int"));
    SampleStore loaded = SampleStore::load(ss, reg);
    REQUIRE(loaded.size() == store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
      CHECK(loaded.samples()[i].parent == store.samples()[i].parent);
      CHECK(loaded.samples()[i].decision == store.samples()[i].decision);
      CHECK(loaded.samples()[i].utility == store.samples()[i].utility);
      CHECK(loaded.samples()[i].weight == store.samples()[i].weight);
    }
  }

  SUBCASE("protein parents") {
    SampleStore store(int_range(2));
    store.append(genetics::protein_value("PAY"), Value::integer(0), 1.5, 1.0);
    store.append(genetics::protein_value("P*Y"), Value::integer(1), -0.5, 0.25);
    store.seal();
    std::stringstream ss;
    store.save(ss, reg.get("protein"), reg.get("int"));
    SampleStore loaded = SampleStore::load(ss, reg);
    CHECK(loaded.samples()[0].parent == genetics::protein_value("PAY"));
    CHECK(loaded.samples()[1].parent == genetics::protein_value("P*Y"));
  }

  SUBCASE("graph parents") {
    GraphValue g;
    g.node_count = 4;
    g.edges = {{0, 1}, {2, 3}};
    SampleStore store({Value::boolean(true), Value::boolean(false)});
    store.append(Value::graph(g), Value::boolean(true), 2.0, 1.0);
    store.seal();
    std::stringstream ss;
    store.save(ss, reg.get("graph"), reg.get("bool"));
    SampleStore loaded = SampleStore::load(ss, reg);
    CHECK(loaded.samples()[0].parent == Value::graph(g));
    CHECK(loaded.decision_range()[0] == Value::boolean(true));
  }

  SUBCASE("malformed input is rejected") {
    std::stringstream ss("#nope\n");
    CHECK_THROWS_AS(SampleStore::load(ss, reg), Error);
  }
}

namespace {

// Two-decision model: d1 observes a constant, d2 observes d1, utility 1
// when they match.
struct TwoStage {
  Model model;
  ElementId d1, d2, util;
};

TwoStage matching_decisions() {
  ModelBuilder b;
  ElementId root = b.constant(Value::integer(0));
  TwoStage out;
  out.d1 = b.decision(root, int_range(2));
  out.d2 = b.decision(out.d1, int_range(2));
  out.util = b.apply({out.d1, out.d2}, [](std::span<const Value> vs) {
    return Value::real(vs[0] == vs[1] ? 1.0 : 0.0);
  });
  b.designate_utility(out.util);
  out.model = std::move(b).build();
  return out;
}

double profile_value(const TwoStage& ts, int d1_choice, int d2_for_0, int d2_for_1) {
  std::map<ElementId, Value> fixed{{ts.d1, Value::integer(d1_choice)}};
  EnumStrategy strategy = [&](const ElementNode& node, const Value& parent) -> EnumChoice {
    if (node.id == ts.d1) return {{1.0, Value::integer(d1_choice)}};
    const int pick = parent.as_integer() == 0 ? d2_for_0 : d2_for_1;
    return {{1.0, Value::integer(pick)}};
  };
  double eu = 0.0;
  for (const EnumeratedWorld& w : exact_enumerate(ts.model, strategy))
    eu += w.probability * w.values[ts.util].as_real();
  return eu;
}

}  // namespace

TEST_CASE("backward induction solves the matching game exactly") {
  TwoStage ts = matching_decisions();
  std::vector<ElementId> order{ts.d1, ts.d2};
  std::vector<ElementId> utils{ts.util};
  auto policies = backward_induction_exact(ts.model, order, utils);

  // Induced play: evaluate the model under the compiled policies.
  EnumStrategy playback = [&](const ElementNode& node, const Value& parent) -> EnumChoice {
    return {{1.0, policies.at(node.id)->decide(parent)}};
  };
  double eu = 0.0;
  for (const EnumeratedWorld& w : exact_enumerate(ts.model, playback))
    eu += w.probability * w.values[ts.util].as_real();

  double best = -1.0;
  for (int a : {0, 1})
    for (int b0 : {0, 1})
      for (int b1 : {0, 1}) best = std::max(best, profile_value(ts, a, b0, b1));
  CHECK(best == doctest::Approx(1.0));
  CHECK(eu == doctest::Approx(best));
}

TEST_CASE("an irrelevant first decision falls back to the tie rule") {
  // Utility depends only on the second decision.
  ModelBuilder b;
  ElementId root = b.constant(Value::integer(0));
  ElementId d1 = b.decision(root, int_range(2));
  ElementId d2 = b.decision(d1, int_range(2));
  ElementId util = b.apply({d2}, [](std::span<const Value> vs) {
    return Value::real(static_cast<double>(vs[0].as_integer()));
  });
  b.designate_utility(util);
  Model m = std::move(b).build();

  std::vector<ElementId> order{d1, d2};
  std::vector<ElementId> utils{util};
  auto policies = backward_induction_exact(m, order, utils);
  CHECK(policies.at(d2)->decide(Value::integer(0)) == Value::integer(1));
  CHECK(policies.at(d1)->decide(Value::integer(0)) == Value::integer(0));  // tie rule
}

TEST_CASE("a single decision reduces to the plain pipeline") {
  ModelBuilder b;
  ElementId parent = b.flip(0.4);
  ElementId dec = b.decision(parent, int_range(2));
  ElementId util = b.apply({parent, dec}, [](std::span<const Value> vs) {
    return Value::real(vs[0].as_boolean() ? static_cast<double>(vs[1].as_integer()) : 1.0);
  });
  b.designate_utility(util);
  Model m = std::move(b).build();
  std::vector<ElementId> utils{util};

  SamplerConfig cfg{SampleMethod::Importance, 500, {}, 4242};
  SampleStore direct = collect_samples(m, dec, utils, cfg);
  std::vector<ElementId> order{dec};
  auto policies = backward_induction(m, order, utils, cfg);

  ExactPolicy from_direct = ExactPolicy::compile(direct);
  for (bool t : {false, true})
    CHECK(policies.at(dec)->decide(Value::boolean(t)) == from_direct.decide(Value::boolean(t)));
}

TEST_CASE("decision sequences inconsistent with the graph are rejected") {
  TwoStage ts = matching_decisions();
  std::vector<ElementId> wrong{ts.d2, ts.d1};
  std::vector<ElementId> utils{ts.util};
  try {
    backward_induction_exact(ts.model, wrong, utils);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadOrdering);
  }
}
