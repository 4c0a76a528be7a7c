#include "decnet/metric_index.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace decnet {

namespace {

// Max-heap entry ordered by (distance, ordinal): the top is the current
// worst of the best k.
struct HeapEntry {
  double distance;
  std::uint32_t ordinal;
  const IndexedItem* item;

  bool operator<(const HeapEntry& other) const {
    if (distance != other.distance) return distance < other.distance;
    return ordinal < other.ordinal;
  }
};

class BestK {
 public:
  explicit BestK(std::size_t k) : k_(k) {}

  double threshold() const {
    return heap_.size() < k_ ? std::numeric_limits<double>::infinity() : heap_.front().distance;
  }

  void offer(const IndexedItem* item, double d) {
    HeapEntry e{d, item->ordinal, item};
    if (heap_.size() < k_) {
      heap_.push_back(e);
      std::push_heap(heap_.begin(), heap_.end());
      return;
    }
    if (e < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = e;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  std::vector<QueryHit> take_sorted() {
    std::sort(heap_.begin(), heap_.end());
    std::vector<QueryHit> out;
    out.reserve(heap_.size());
    for (const HeapEntry& e : heap_) out.push_back(QueryHit{e.item, e.distance});
    return out;
  }

 private:
  std::size_t k_;
  std::vector<HeapEntry> heap_;
};

class LinearIndex final : public MetricIndex {
 public:
  LinearIndex(std::vector<IndexedItem> items, DistanceFunction distance)
      : items_(std::move(items)), distance_(std::move(distance)) {}

  std::vector<QueryHit> query_knn(const Value& query, int k) const override {
    if (k < 1) fail(ErrorKind::InvalidParameter, "query_knn: k must be at least 1");
    queries_.fetch_add(1, std::memory_order_relaxed);
    BestK best(static_cast<std::size_t>(k));
    for (const IndexedItem& item : items_) best.offer(&item, distance_(query, item.point));
    evals_.fetch_add(items_.size(), std::memory_order_relaxed);
    return best.take_sorted();
  }

  std::size_t size() const override { return items_.size(); }

  IndexStats stats() const override {
    return IndexStats{items_.size(), 0, evals_.load(std::memory_order_relaxed),
                      queries_.load(std::memory_order_relaxed)};
  }

  void reset_counters() const override {
    evals_.store(0, std::memory_order_relaxed);
    queries_.store(0, std::memory_order_relaxed);
  }

 private:
  std::vector<IndexedItem> items_;
  DistanceFunction distance_;
  mutable std::atomic<std::uint64_t> evals_{0};
  mutable std::atomic<std::uint64_t> queries_{0};
};

class VpTreeIndex final : public MetricIndex {
 public:
  VpTreeIndex(std::vector<IndexedItem> items, DistanceFunction distance, int bucket_size,
              std::uint64_t seed)
      : items_(std::move(items)), distance_(std::move(distance)),
        bucket_size_(std::max(1, bucket_size)) {
    std::mt19937_64 engine(seed);
    std::vector<std::uint32_t> all(items_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!all.empty()) root_ = build(std::move(all), engine, 1);
  }

  std::vector<QueryHit> query_knn(const Value& query, int k) const override {
    if (k < 1) fail(ErrorKind::InvalidParameter, "query_knn: k must be at least 1");
    queries_.fetch_add(1, std::memory_order_relaxed);
    BestK best(static_cast<std::size_t>(k));
    std::uint64_t evals = 0;
    if (root_ >= 0) search(root_, query, best, evals);
    evals_.fetch_add(evals, std::memory_order_relaxed);
    return best.take_sorted();
  }

  std::size_t size() const override { return items_.size(); }

  IndexStats stats() const override {
    return IndexStats{items_.size(), depth_, evals_.load(std::memory_order_relaxed),
                      queries_.load(std::memory_order_relaxed)};
  }

  void reset_counters() const override {
    evals_.store(0, std::memory_order_relaxed);
    queries_.store(0, std::memory_order_relaxed);
  }

  // Structural audit used by tests: walks the whole tree and reports the
  // multiset size and max depth.
  std::pair<std::size_t, int> audit() const {
    std::size_t count = 0;
    int max_depth = 0;
    if (root_ >= 0) walk(root_, 1, count, max_depth);
    return {count, max_depth};
  }

 private:
  struct Node {
    bool leaf = false;
    std::vector<std::uint32_t> bucket;  // leaf payload
    std::uint32_t vantage = 0;
    double mu = 0.0;
    int inside = -1;
    int outside = -1;
  };

  int build(std::vector<std::uint32_t> population, std::mt19937_64& engine, int depth) {
    depth_ = std::max(depth_, depth);
    Node node;
    if (population.size() <= static_cast<std::size_t>(bucket_size_)) {
      node.leaf = true;
      node.bucket = std::move(population);
      nodes_.push_back(std::move(node));
      return static_cast<int>(nodes_.size() - 1);
    }
    std::size_t pick =
        std::uniform_int_distribution<std::size_t>(0, population.size() - 1)(engine);
    std::swap(population[pick], population.back());
    std::uint32_t vantage = population.back();
    population.pop_back();

    std::vector<std::pair<double, std::uint32_t>> dists;
    dists.reserve(population.size());
    for (std::uint32_t idx : population)
      dists.emplace_back(distance_(items_[vantage].point, items_[idx].point), idx);
    std::size_t mid = (dists.size() - 1) / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid),
                     dists.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double mu = dists[mid].first;

    std::vector<std::uint32_t> inside, outside;
    for (const auto& [d, idx] : dists) (d <= mu ? inside : outside).push_back(idx);

    if (outside.empty()) {
      // Splitting cannot separate the population (all distances tie at or
      // below the median); fall through to one leaf bucket.
      population.push_back(vantage);
      node.leaf = true;
      node.bucket = std::move(population);
      nodes_.push_back(std::move(node));
      return static_cast<int>(nodes_.size() - 1);
    }

    node.vantage = vantage;
    node.mu = mu;
    int self = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(node));
    int in = build(std::move(inside), engine, depth + 1);
    int out = build(std::move(outside), engine, depth + 1);
    nodes_[self].inside = in;
    nodes_[self].outside = out;
    return self;
  }

  void search(int node_id, const Value& query, BestK& best, std::uint64_t& evals) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.leaf) {
      for (std::uint32_t idx : node.bucket) {
        ++evals;
        best.offer(&items_[idx], distance_(query, items_[idx].point));
      }
      return;
    }
    ++evals;
    double d = distance_(query, items_[node.vantage].point);
    best.offer(&items_[node.vantage], d);
    // Reverse-triangle bounds: inside holds items within mu of the vantage,
    // outside the rest. Inclusive comparisons keep boundary ties exact.
    auto visit_inside = [&] {
      if (node.inside >= 0 && d - best.threshold() <= node.mu)
        search(node.inside, query, best, evals);
    };
    auto visit_outside = [&] {
      if (node.outside >= 0 && d + best.threshold() >= node.mu)
        search(node.outside, query, best, evals);
    };
    if (d <= node.mu) {
      visit_inside();
      visit_outside();
    } else {
      visit_outside();
      visit_inside();
    }
  }

  void walk(int node_id, int depth, std::size_t& count, int& max_depth) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    max_depth = std::max(max_depth, depth);
    if (node.leaf) {
      count += node.bucket.size();
      return;
    }
    count += 1;
    if (node.inside >= 0) walk(node.inside, depth + 1, count, max_depth);
    if (node.outside >= 0) walk(node.outside, depth + 1, count, max_depth);
  }

  std::vector<IndexedItem> items_;
  DistanceFunction distance_;
  int bucket_size_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int depth_ = 0;
  mutable std::atomic<std::uint64_t> evals_{0};
  mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace

std::unique_ptr<MetricIndex> build_linear(std::vector<IndexedItem> items,
                                          DistanceFunction distance) {
  return std::make_unique<LinearIndex>(std::move(items), std::move(distance));
}

std::unique_ptr<MetricIndex> build_vptree(std::vector<IndexedItem> items,
                                          DistanceFunction distance, int bucket_size,
                                          std::uint64_t seed) {
  return std::make_unique<VpTreeIndex>(std::move(items), std::move(distance), bucket_size, seed);
}

std::unique_ptr<MetricIndex> build_index(IndexKind kind, std::vector<IndexedItem> items,
                                         DistanceFunction distance, int bucket_size,
                                         std::uint64_t seed) {
  switch (kind) {
    case IndexKind::Linear: return build_linear(std::move(items), std::move(distance));
    case IndexKind::VpTree:
      return build_vptree(std::move(items), std::move(distance), bucket_size, seed);
  }
  fail(ErrorKind::InvalidSpec, "unknown index kind");
}

const char* index_kind_name(IndexKind kind) {
  return kind == IndexKind::Linear ? "linear" : "vptree";
}

}  // namespace decnet
