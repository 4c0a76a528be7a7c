#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "decnet/distance.hpp"

namespace decnet {

// One stored sample inside an index. The ordinal is the insertion position
// within this index and breaks equal-distance ties, which keeps query
// results deterministic and identical across index implementations.
struct IndexedItem {
  Value point;
  Value decision;
  double utility = 0.0;
  double weight = 0.0;
  std::uint32_t ordinal = 0;
};

struct QueryHit {
  const IndexedItem* item = nullptr;
  double distance = 0.0;
};

struct IndexStats {
  std::size_t size = 0;
  int depth = 0;  // 0 for the linear index
  std::uint64_t distance_evals = 0;
  std::uint64_t queries = 0;

  double mean_evals_per_query() const {
    return queries ? static_cast<double>(distance_evals) / static_cast<double>(queries) : 0.0;
  }
};

// Built once, immutable afterwards; queries are const and may run
// concurrently (the instrumentation counters are atomic).
class MetricIndex {
 public:
  virtual ~MetricIndex() = default;

  // min(k, size) items sorted by ascending (distance, ordinal).
  virtual std::vector<QueryHit> query_knn(const Value& query, int k) const = 0;

  virtual std::size_t size() const = 0;
  virtual IndexStats stats() const = 0;
  virtual void reset_counters() const = 0;
};

enum class IndexKind { Linear, VpTree };

std::unique_ptr<MetricIndex> build_linear(std::vector<IndexedItem> items,
                                          DistanceFunction distance);

// Metric space partitioning tree. Vantage points are picked uniformly at
// random from the seeded stream; populations of at most bucket_size become
// leaf buckets. Exact under (pseudo)metric distances; non-metric distances
// query without correctness guarantees.
std::unique_ptr<MetricIndex> build_vptree(std::vector<IndexedItem> items,
                                          DistanceFunction distance, int bucket_size = 32,
                                          std::uint64_t seed = 0);

std::unique_ptr<MetricIndex> build_index(IndexKind kind, std::vector<IndexedItem> items,
                                         DistanceFunction distance, int bucket_size = 32,
                                         std::uint64_t seed = 0);

const char* index_kind_name(IndexKind kind);

}  // namespace decnet
