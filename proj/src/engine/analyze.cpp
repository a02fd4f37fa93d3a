#include "miner/engine/analyze.hpp"

#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <map>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_set>

#include "miner/engine/diff.hpp"
#include "miner/engine/materialize.hpp"
#include "miner/error.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

Json error_value(const std::string& message) {
  Json v;
  v["error"] = message;
  return v;
}

MetricResult eval_blob_metric(const RegisteredMetric& metric, const ObjectId& blob_id,
                              const std::function<const std::string&()>& content, CacheStore* cache) {
  MetricResult result;
  result.name = metric.descriptor.name;
  if (cache != nullptr && metric.descriptor.cacheable) {
    const auto outcome = cache->get_or_compute(CacheKey{blob_id, metric.descriptor.name},
                                               [&] { return metric.blob(content()); });
    result.cached = outcome.hit;
    if (outcome.failed) {
      result.failed = true;
      result.value = error_value(outcome.error_message);
    } else {
      result.value = outcome.value;
    }
    return result;
  }
  try {
    result.value = metric.blob(content());
  } catch (const std::exception& e) {
    result.failed = true;
    result.value = error_value(e.what());
  }
  return result;
}

// Tree metrics over the full tree are keyed by the tree id: the listing is
// a pure function of it. Diff listings have no single id, so no caching.
MetricResult eval_tree_metric(const RegisteredMetric& metric, const ObjectId& tree_id,
                              bool full_scope, const std::vector<BlobEntry>& listing,
                              CacheStore* cache) {
  MetricResult result;
  result.name = metric.descriptor.name;
  if (cache != nullptr && metric.descriptor.cacheable && full_scope) {
    const auto outcome = cache->get_or_compute(CacheKey{tree_id, metric.descriptor.name},
                                               [&] { return metric.tree(listing); });
    result.cached = outcome.hit;
    if (outcome.failed) {
      result.failed = true;
      result.value = error_value(outcome.error_message);
    } else {
      result.value = outcome.value;
    }
    return result;
  }
  try {
    result.value = metric.tree(listing);
  } catch (const std::exception& e) {
    result.failed = true;
    result.value = error_value(e.what());
  }
  return result;
}

}  // namespace

CommitRecord analyze_commit(const Repository& repo, const ObjectId& commit_id,
                            const std::vector<const RegisteredMetric*>& metrics,
                            CacheStore* cache, const fs::path& scratch) {
  CommitRecord record;
  record.id = commit_id;
  try {
    record.commit = repo.read_commit(commit_id);
  } catch (const std::exception& e) {
    record.error = CommitRecord::TaskError{"commit", e.what()};
    return record;
  }
  const CommitInfo& commit = *record.commit;

  bool want_blob_full = false, want_blob_diff = false;
  bool want_tree_full = false, want_tree_diff = false;
  bool want_dir_full = false, want_dir_diff = false;
  for (const auto* m : metrics) {
    switch (m->descriptor.kind.scope) {
      case MetricScope::blob: (m->descriptor.kind.diff_only ? want_blob_diff : want_blob_full) = true; break;
      case MetricScope::tree: (m->descriptor.kind.diff_only ? want_tree_diff : want_tree_full) = true; break;
      case MetricScope::dir: (m->descriptor.kind.diff_only ? want_dir_diff : want_dir_full) = true; break;
    }
  }

  try {
    // --- blob-scoped metrics ---------------------------------------------
    std::vector<TreeBlobRef> targets;
    std::unordered_set<std::string> touched_paths;
    if (want_blob_diff || want_blob_full) {
      if (want_blob_diff) {
        for_each_touched_blob(repo, commit, [&](const TreeBlobRef& ref) {
          touched_paths.insert(ref.path);
          if (!want_blob_full) targets.push_back(ref);
        });
      }
      if (want_blob_full) {
        repo.for_each_blob(commit.tree_id,
                           [&](const TreeBlobRef& ref) { targets.push_back(ref); });
      }
    }
    for (const auto& ref : targets) {
      RecordBlob blob;
      blob.id = ref.id;
      blob.path = ref.path;
      std::optional<std::string> content;  // loaded at most once, only on a miss
      const auto content_ref = [&]() -> const std::string& {
        if (!content) content = repo.read_blob(ref.id);
        return *content;
      };
      // when only diff metrics were requested, the target list already is
      // the touched set
      const bool touched = !want_blob_full || touched_paths.contains(ref.path);
      for (const auto* m : metrics) {
        if (m->descriptor.kind.scope != MetricScope::blob) continue;
        if (m->descriptor.kind.diff_only && !touched) continue;
        blob.metrics.push_back(eval_blob_metric(*m, ref.id, content_ref, cache));
      }
      record.blobs.push_back(std::move(blob));
    }

    // --- tree-scoped metrics ---------------------------------------------
    std::optional<std::vector<BlobEntry>> full_listing, diff_listing;
    if (want_tree_full) full_listing = repo.list_tree(commit.tree_id);
    if (want_tree_diff) diff_listing = touched_blobs(repo, commit);

    // --- dir-scoped metrics ----------------------------------------------
    std::optional<fs::path> full_dir, diff_dir;
    std::string full_dir_error, diff_dir_error;
    const auto try_materialize = [&](MaterializeSubset subset, const char* tag,
                                     std::optional<fs::path>& out, std::string& error) {
      const fs::path dest = scratch / (commit_id.hex() + tag);
      try {
        out = materialize(repo, commit, subset, dest);
      } catch (const std::exception& e) {
        error = e.what();
        std::error_code ec;
        fs::remove_all(dest, ec);  // drop whatever was written before the failure
      }
    };
    if (want_dir_full) try_materialize(MaterializeSubset::full_tree, "-full", full_dir, full_dir_error);
    if (want_dir_diff)
      try_materialize(MaterializeSubset::touched_only, "-diff", diff_dir, diff_dir_error);

    for (const auto* m : metrics) {
      const auto scope = m->descriptor.kind.scope;
      if (scope == MetricScope::blob) continue;
      if (scope == MetricScope::tree) {
        const bool full = !m->descriptor.kind.diff_only;
        record.commit_metrics.push_back(eval_tree_metric(
            *m, commit.tree_id, full, full ? *full_listing : *diff_listing, cache));
      } else {
        MetricResult result;
        result.name = m->descriptor.name;
        const auto& dir = m->descriptor.kind.diff_only ? diff_dir : full_dir;
        const auto& dir_error = m->descriptor.kind.diff_only ? diff_dir_error : full_dir_error;
        if (!dir) {
          result.failed = true;
          result.value = error_value(dir_error.empty() ? "materialization failed" : dir_error);
        } else {
          try {
            result.value = m->dir(*dir);
          } catch (const std::exception& e) {
            result.failed = true;
            result.value = error_value(e.what());
          }
        }
        record.commit_metrics.push_back(std::move(result));
      }
    }

    std::error_code ec;
    if (full_dir) fs::remove_all(*full_dir, ec);
    if (diff_dir) fs::remove_all(*diff_dir, ec);
  } catch (const std::exception& e) {
    // repository access failed mid-commit: the whole commit becomes a task
    // error, per-metric results gathered so far are dropped
    record.commit_metrics.clear();
    record.blobs.clear();
    record.error = CommitRecord::TaskError{"analyze", e.what()};
  }
  return record;
}

std::size_t analyze_stream(const Repository& repo, const std::vector<ObjectId>& commit_ids,
                           const std::vector<const RegisteredMetric*>& metrics,
                           const EngineOptions& options,
                           const std::function<void(CommitRecord&&)>& emit,
                           CacheStore* shared_cache) {
  const int workers = std::max(1, options.workers);

  std::optional<CacheStore> own_cache;
  CacheStore* cache = nullptr;
  if (options.cache_enabled) {
    cache = shared_cache;
    if (cache == nullptr) {
      own_cache.emplace(options.cache_capacity);
      cache = &*own_cache;
    }
  }

  fs::path scratch;
  if (options.scratch_dir) {
    scratch = *options.scratch_dir;
  } else {
    std::random_device rd;
    scratch = fs::temp_directory_path() /
              ("miner-run-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
  }
  std::error_code ec;
  fs::create_directories(scratch, ec);

  std::mutex mutex;
  std::condition_variable done_cv;
  std::map<std::size_t, CommitRecord> done;  // index -> record
  std::atomic<std::size_t> next_task{0};
  std::atomic<std::size_t> error_count{0};

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next_task.fetch_add(1);
        if (i >= commit_ids.size()) return;
        CommitRecord record = analyze_commit(repo, commit_ids[i], metrics, cache, scratch);
        if (record.error) error_count.fetch_add(1);
        {
          std::lock_guard lock(mutex);
          done.emplace(i, std::move(record));
        }
        done_cv.notify_one();
      }
    });
  }

  // Single consumer: emit in input order when asked, completion order
  // otherwise.
  std::size_t emitted = 0, next_in_order = 0;
  while (emitted < commit_ids.size()) {
    CommitRecord record;
    {
      std::unique_lock lock(mutex);
      if (options.preserve_input_order) {
        done_cv.wait(lock, [&] { return done.contains(next_in_order); });
        auto it = done.find(next_in_order);
        record = std::move(it->second);
        done.erase(it);
        ++next_in_order;
      } else {
        done_cv.wait(lock, [&] { return !done.empty(); });
        auto it = done.begin();
        record = std::move(it->second);
        done.erase(it);
      }
    }
    emit(std::move(record));
    ++emitted;
  }

  for (auto& t : pool) t.join();
  if (!options.scratch_dir) fs::remove_all(scratch, ec);
  return error_count.load();
}

}  // namespace miner
