#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "miner/git/object_id.hpp"
#include "miner/metrics/metric.hpp"

namespace miner {

// Content-addressed: the key never includes commit identity, so identical
// blobs across commits resolve to one computation.
struct CacheKey {
  ObjectId blob_id;
  std::string metric_name;

  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& key) const {
    return ObjectIdHash{}(key.blob_id) ^ (std::hash<std::string>{}(key.metric_name) * 31);
  }
};

// Compute-once map from CacheKey to metric value. Lookups for a key whose
// computation is in flight block until it finishes, so the compute function
// runs at most once per key for any worker count. Failed computations are
// remembered too: analyses are idempotent, so the error would simply recur.
class CacheStore {
 public:
  // max_entries caps completed entries with least-recently-used eviction;
  // unbounded by default.
  explicit CacheStore(std::optional<std::size_t> max_entries = std::nullopt);

  struct Outcome {
    Json value;                // metric value, or unset on error
    bool hit = false;          // satisfied without running compute here
    bool failed = false;
    std::string error_message;
  };

  Outcome get_or_compute(const CacheKey& key, const std::function<Json()>& compute);

  std::uint64_t hit_count() const { return hits_.load(); }
  std::uint64_t miss_count() const { return misses_.load(); }
  std::size_t size() const;

 private:
  struct Entry;
  void touch_locked(Entry& entry);
  void evict_locked();

  std::optional<std::size_t> max_entries_;
  mutable std::mutex mutex_;
  std::unordered_map<CacheKey, std::shared_ptr<Entry>, CacheKeyHash> entries_;
  std::list<CacheKey> lru_;  // most recent at the front
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

}  // namespace miner
