#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "miner/engine/cache.hpp"
#include "miner/git/repository.hpp"
#include "miner/metrics/metric.hpp"

namespace miner {

struct MetricResult {
  std::string name;
  Json value;  // on failure: {"error": "<message>"}
  bool cached = false;
  bool failed = false;
};

struct RecordBlob {
  ObjectId id;
  std::string path;
  std::vector<MetricResult> metrics;
};

// One line of output: a commit with its commit-level metric results and
// per-blob results. A task-level failure leaves metrics/blobs empty and
// sets error instead.
struct CommitRecord {
  ObjectId id;
  std::optional<CommitInfo> commit;
  std::vector<MetricResult> commit_metrics;  // tree- and dir-scoped results
  std::vector<RecordBlob> blobs;

  struct TaskError {
    std::string stage;
    std::string message;
  };
  std::optional<TaskError> error;
};

struct EngineOptions {
  int workers = 1;
  bool preserve_input_order = false;  // otherwise completion order
  bool cache_enabled = true;
  std::optional<std::size_t> cache_capacity;        // entries; unbounded by default
  std::optional<std::filesystem::path> scratch_dir; // dir-metric checkouts live here
};

CommitRecord analyze_commit(const Repository& repo, const ObjectId& commit_id,
                            const std::vector<const RegisteredMetric*>& metrics,
                            CacheStore* cache, const std::filesystem::path& scratch);

// Analyzes every commit on a pool of `workers` threads sharing one cache;
// emit runs serially on the calling thread. Per-commit failures become
// error records, never lost stream entries. Returns the number of records
// that carry a task error.
std::size_t analyze_stream(const Repository& repo, const std::vector<ObjectId>& commit_ids,
                           const std::vector<const RegisteredMetric*>& metrics,
                           const EngineOptions& options,
                           const std::function<void(CommitRecord&&)>& emit,
                           CacheStore* shared_cache = nullptr);

}  // namespace miner
