#include <doctest.h>

#include <cmath>
#include <set>

#include "decnet/metric_index.hpp"
#include "decnet/random.hpp"

using namespace decnet;

namespace {

std::vector<IndexedItem> real_items(const std::vector<double>& points) {
  std::vector<IndexedItem> items;
  std::uint32_t ordinal = 0;
  for (double p : points)
    items.push_back(IndexedItem{Value::real(p), Value::integer(0), 0.0, 1.0, ordinal++});
  return items;
}

std::vector<IndexedItem> random_2d_items(int n, RandomSource& rng) {
  std::vector<IndexedItem> items;
  for (int i = 0; i < n; ++i) {
    Value p = Value::tuple({Value::real(rng.uniform(0.0, 1.0)),
                            Value::real(rng.uniform(0.0, 1.0))});
    items.push_back(IndexedItem{std::move(p), Value::integer(0), 0.0, 1.0,
                                static_cast<std::uint32_t>(i)});
  }
  return items;
}

}  // namespace

TEST_CASE("linear index keeps insertion order and multiset semantics") {
  auto empty = build_linear({}, absolute_distance());
  CHECK(empty->size() == 0);
  CHECK(empty->query_knn(Value::real(0.0), 3).empty());

  auto three = build_linear(real_items({5.0, 1.0, 5.0}), absolute_distance());
  CHECK(three->size() == 3);  // duplicates count
  auto hits = three->query_knn(Value::real(5.0), 3);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].item->ordinal == 0);  // equal distances resolve by ordinal
  CHECK(hits[1].item->ordinal == 2);
  CHECK(hits[2].item->ordinal == 1);
}

TEST_CASE("hand geometry on the line") {
  for (IndexKind kind : {IndexKind::Linear, IndexKind::VpTree}) {
    auto index = build_index(kind, real_items({0.0, 1.0, 2.0, 3.0}), absolute_distance());
    auto hits = index->query_knn(Value::real(1.4), 2);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].distance == doctest::Approx(0.4));
    CHECK(hits[0].item->point == Value::real(1.0));
    CHECK(hits[1].distance == doctest::Approx(0.6));
    CHECK(hits[1].item->point == Value::real(2.0));

    auto all = index->query_knn(Value::real(1.4), 99);
    CHECK(all.size() == 4);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].distance <= all[i].distance);
  }
}

TEST_CASE("small populations become a single leaf") {
  RandomSource rng(5);
  std::vector<double> points;
  for (int i = 0; i < 16; ++i) points.push_back(rng.uniform01());
  auto index = build_vptree(real_items(points), absolute_distance(), 16, 9);
  CHECK(index->stats().depth == 1);
  CHECK(index->query_knn(Value::real(0.5), 16).size() == 16);
}

TEST_CASE("vp-tree structure stays balanced on random reals") {
  RandomSource rng(6);
  std::vector<double> points;
  for (int i = 0; i < 1000; ++i) points.push_back(rng.uniform01());
  auto index = build_vptree(real_items(points), absolute_distance(), 16, 10);
  const int bound = 2 * static_cast<int>(std::ceil(std::log2(1000.0 / 16.0))) + 4;
  CHECK(index->stats().depth <= bound);

  // Every stored item is retrievable.
  auto all = index->query_knn(Value::real(0.5), 1000);
  CHECK(all.size() == 1000);
  std::set<std::uint32_t> seen;
  for (const QueryHit& h : all) seen.insert(h.item->ordinal);
  CHECK(seen.size() == 1000);
}

TEST_CASE("identical points degenerate into one bucket but still answer") {
  auto index = build_vptree(real_items(std::vector<double>(100, 7.0)), absolute_distance(), 8, 1);
  auto hits = index->query_knn(Value::real(7.0), 5);
  REQUIRE(hits.size() == 5);
  for (const auto& h : hits) CHECK(h.distance == 0.0);
  // Ordinal tie order.
  for (std::uint32_t i = 0; i < 5; ++i) CHECK(hits[i].item->ordinal == i);
}

TEST_CASE("vp-tree equals the linear oracle on random planar points") {
  RandomSource rng(12);
  auto items = random_2d_items(10000, rng);
  auto linear = build_linear(items, default_distance());
  auto vptree = build_vptree(items, default_distance(), 32, 13);

  for (int q = 0; q < 100; ++q) {
    Value query = Value::tuple({Value::real(rng.uniform(0.0, 1.0)),
                                Value::real(rng.uniform(0.0, 1.0))});
    auto expect = linear->query_knn(query, 10);
    auto got = vptree->query_knn(query, 10);
    REQUIRE(expect.size() == got.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(expect[i].distance == got[i].distance);
      CHECK(expect[i].item->ordinal == got[i].item->ordinal);
      // Reported distances recompute from the stored points.
      CHECK(got[i].distance ==
            doctest::Approx(default_distance()(query, got[i].item->point)));
    }
  }
}

TEST_CASE("pruning skips most of the population") {
  RandomSource rng(14);
  std::vector<double> points;
  for (int i = 0; i < 10000; ++i) points.push_back(rng.uniform01());
  auto vptree = build_vptree(real_items(points), absolute_distance(), 32, 15);
  vptree->reset_counters();
  for (int q = 0; q < 100; ++q) (void)vptree->query_knn(Value::real(rng.uniform01()), 10);
  IndexStats stats = vptree->stats();
  CHECK(stats.queries == 100);
  CHECK(stats.mean_evals_per_query() < 0.2 * 10000.0);
}
