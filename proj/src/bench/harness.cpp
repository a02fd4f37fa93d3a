#include "miner/bench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace miner {
namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BenchResult bench_iteration(const Repository& repo, const std::string& branch, int repetitions) {
  BenchResult result;
  result.scenario = "iteration";
  result.workers = 1;
  result.cache = false;

  const std::vector<std::string> branches{branch};
  std::vector<double> walls;
  std::size_t sink_bytes = 0;
  for (int rep = 0; rep < std::max(1, repetitions); ++rep) {
    const auto start = Clock::now();
    const auto ids = walk_commits(repo, branches);
    std::string sink;
    sink.reserve(ids.size() * 41);
    for (const auto& id : ids) {
      sink += id.hex();
      sink += '\n';
    }
    walls.push_back(seconds_since(start));
    sink_bytes = sink.size();  // keep the formatting work observable
    result.commits = ids.size();
  }
  (void)sink_bytes;
  result.wall_seconds = median(walls);
  result.commits_per_second =
      result.wall_seconds > 0 ? static_cast<double>(result.commits) / result.wall_seconds : 0.0;
  return result;
}

BenchResult bench_mining(const Repository& repo, const MetricRegistry& registry,
                         const std::string& metric, const std::string& branch, int workers,
                         bool cache, int repetitions) {
  BenchResult result;
  result.scenario = "mining-" + metric;
  result.workers = workers;
  result.cache = cache;

  const std::vector<std::string> branches{branch};
  const std::vector<ObjectId> ids = walk_commits(repo, branches);
  result.commits = ids.size();
  const std::vector<const RegisteredMetric*> metrics{&registry.resolve(metric)};

  std::vector<double> walls;
  for (int rep = 0; rep < std::max(1, repetitions); ++rep) {
    EngineOptions options;
    options.workers = workers;
    options.cache_enabled = cache;  // one fresh cache per run
    std::size_t records = 0;
    const auto start = Clock::now();
    analyze_stream(repo, ids, metrics, options,
                   [&](CommitRecord&& record) { records += record.error ? 0 : 1; });
    walls.push_back(seconds_since(start));
  }
  result.wall_seconds = median(walls);
  result.commits_per_second =
      result.wall_seconds > 0 ? static_cast<double>(result.commits) / result.wall_seconds : 0.0;
  return result;
}

std::string bench_csv_header() {
  return "scenario,project,commits,workers,cache,wall_seconds,commits_per_second";
}

std::string bench_csv_row(const BenchResult& r) {
  std::ostringstream out;
  out << r.scenario << ',' << r.project << ',' << r.commits << ',' << r.workers << ','
      << (r.cache ? "true" : "false") << ',';
  out.precision(9);
  out << r.wall_seconds << ',' << r.commits_per_second;
  return out.str();
}

BlobMetricFn counted_blob_fn(BlobMetricFn fn,
                             std::shared_ptr<std::atomic<std::uint64_t>> counter) {
  return [fn = std::move(fn), counter = std::move(counter)](std::string_view content) {
    counter->fetch_add(1);
    return fn(content);
  };
}

}  // namespace miner
