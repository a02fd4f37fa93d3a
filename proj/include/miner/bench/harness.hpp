#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "miner/engine/analyze.hpp"
#include "miner/traversal.hpp"

namespace miner {

struct BenchResult {
  std::string scenario;
  std::string project;
  std::uint64_t commits = 0;
  int workers = 1;
  bool cache = true;
  double wall_seconds = 0.0;  // median over repetitions
  double commits_per_second = 0.0;
};

// Reported throughput context from the original evaluation; carried into
// CSV output as comments, never asserted.
struct ReferenceFigures {
  static constexpr double iteration_min_cps = 23229.0;
  static constexpr double iteration_max_cps = 28899.0;
  static constexpr double mining_single_thread_min_cps = 2.0;
  static constexpr double mining_single_thread_max_cps = 79.8;
  static constexpr double baseline_min_cps = 1.2;
  static constexpr double baseline_max_cps = 4.0;
  static constexpr double mean_single_thread_speedup = 15.6;
  static constexpr double speedup_12_workers_body = 68.9;
  static constexpr double speedup_12_workers_abstract = 86.9;
};

// Walks every commit reachable from branch (defaults applied) and formats
// each id, repeated `repetitions` times; the median wall time wins.
BenchResult bench_iteration(const Repository& repo, const std::string& branch,
                            int repetitions = 5);

// Full analyze run over all commits of branch with one registered metric.
BenchResult bench_mining(const Repository& repo, const MetricRegistry& registry,
                         const std::string& metric, const std::string& branch, int workers,
                         bool cache, int repetitions = 5);

std::string bench_csv_header();
std::string bench_csv_row(const BenchResult& result);

// Wraps a blob metric so every real execution bumps the counter; cache hits
// do not. The instrument for compute-once checks.
BlobMetricFn counted_blob_fn(BlobMetricFn fn, std::shared_ptr<std::atomic<std::uint64_t>> counter);

}  // namespace miner
