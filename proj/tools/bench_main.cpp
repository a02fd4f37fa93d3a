// miner-bench - synthetic repository generation and throughput measurement,
// reported as CSV on stdout.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "miner/bench/harness.hpp"
#include "miner/bench/synth.hpp"
#include "miner/metrics/metric.hpp"

namespace {

using namespace miner;
namespace fs = std::filesystem;

void print_reference_comments() {
  std::cout << "# reference (original evaluation, 18-core i9, RAM disk):\n"
            << "#   commit iteration: " << ReferenceFigures::iteration_min_cps << "-"
            << ReferenceFigures::iteration_max_cps << " commits/s\n"
            << "#   loc mining single-threaded: "
            << ReferenceFigures::mining_single_thread_min_cps << "-"
            << ReferenceFigures::mining_single_thread_max_cps << " commits/s (baseline "
            << ReferenceFigures::baseline_min_cps << "-" << ReferenceFigures::baseline_max_cps
            << ")\n"
            << "#   mean single-thread speedup " << ReferenceFigures::mean_single_thread_speedup
            << "x; 12-worker speedup reported as " << ReferenceFigures::speedup_12_workers_body
            << "x (evaluation) and " << ReferenceFigures::speedup_12_workers_abstract
            << "x (abstract)\n";
}

int run_suite(const fs::path& workdir, int repetitions) {
  std::error_code ec;
  fs::create_directories(workdir, ec);
  MetricRegistry registry;
  register_builtin_metrics(registry);

  print_reference_comments();
  std::cout << bench_csv_header() << "\n";

  {
    SynthRepoSpec spec{.commits = 5000, .files = 10, .pattern = TouchPattern::round_robin,
                       .bytes_per_change = 512, .seed = 11};
    const fs::path dest = workdir / "iter-5000.git";
    if (!fs::exists(dest)) generate_repo(spec, dest);
    auto result = bench_iteration(Repository::open(dest), "main", repetitions);
    result.project = "synth-5000";
    std::cout << bench_csv_row(result) << "\n";
  }

  {
    SynthRepoSpec spec{.commits = 1000, .files = 20, .pattern = TouchPattern::round_robin,
                       .bytes_per_change = 2048, .seed = 12};
    const fs::path dest = workdir / "mine-1000.git";
    if (!fs::exists(dest)) generate_repo(spec, dest);
    const Repository repo = Repository::open(dest);
    for (const int workers : {1, 4, 8, 12}) {
      auto result = bench_mining(repo, registry, "diffloc", "main", workers, true, repetitions);
      result.project = "synth-1000";
      std::cout << bench_csv_row(result) << "\n";
    }
  }

  {
    SynthRepoSpec spec{.commits = 1000, .files = 20, .pattern = TouchPattern::all_files,
                       .bytes_per_change = 8192, .seed = 13};
    const fs::path dest = workdir / "cache-1000.git";
    if (!fs::exists(dest)) generate_repo(spec, dest);
    const Repository repo = Repository::open(dest);
    for (const bool cache : {false, true}) {
      auto result = bench_mining(repo, registry, "loc", "main", 1, cache, repetitions);
      result.project = "synth-cache";
      result.scenario = "cache-comparison";
      std::cout << bench_csv_row(result) << "\n";
    }
  }

  {
    SynthRepoSpec spec{.commits = 1000, .files = 10, .pattern = TouchPattern::round_robin,
                       .bytes_per_change = 64, .seed = 14};
    const fs::path dest = workdir / "busy-1000.git";
    if (!fs::exists(dest)) generate_repo(spec, dest);
    const Repository repo = Repository::open(dest);
    for (const int workers : {1, 4}) {
      auto result = bench_mining(repo, registry, "busy", "main", workers, false, repetitions);
      result.project = "synth-busy";
      result.scenario = "scaling-busy";
      std::cout << bench_csv_row(result) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale mining benchmarks"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "generate a synthetic bare repository");
  SynthRepoSpec spec;
  std::string pattern = "round_robin";
  std::string dest;
  generate->add_option("dest", dest, "destination path")->required();
  generate->add_option("--commits", spec.commits)->check(CLI::PositiveNumber);
  generate->add_option("--files", spec.files)->check(CLI::PositiveNumber);
  generate->add_option("--pattern", pattern)
      ->check(CLI::IsMember({"round_robin", "single_hot_file", "all_files"}));
  generate->add_option("--bytes", spec.bytes_per_change)->check(CLI::PositiveNumber);
  generate->add_option("--seed", spec.seed);

  auto* iteration = app.add_subcommand("iteration", "commit iteration throughput");
  std::string iter_repo, iter_branch = "HEAD";
  int repetitions = 5;
  iteration->add_option("repository", iter_repo)->required();
  iteration->add_option("--branch", iter_branch);
  iteration->add_option("--repetitions", repetitions)->check(CLI::PositiveNumber);

  auto* mining = app.add_subcommand("mining", "full analysis throughput");
  std::string mine_repo, mine_branch = "HEAD", mine_metric = "diffloc";
  std::vector<int> workers{1};
  bool no_cache = false;
  int mine_reps = 5;
  mining->add_option("repository", mine_repo)->required();
  mining->add_option("--branch", mine_branch);
  mining->add_option("--metric", mine_metric);
  mining->add_option("--workers", workers, "worker counts, one CSV row each");
  mining->add_flag("--no-cache", no_cache);
  mining->add_option("--repetitions", mine_reps)->check(CLI::PositiveNumber);

  auto* suite = app.add_subcommand("suite", "the full desk-scale scenario sweep");
  std::string workdir = "bench-work";
  int suite_reps = 5;
  suite->add_option("--workdir", workdir, "where synthetic repositories live");
  suite->add_option("--repetitions", suite_reps)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) {
      spec.pattern = touch_pattern_from_name(pattern);
      generate_repo(spec, dest);
      return 0;
    }
    if (iteration->parsed()) {
      auto result = bench_iteration(Repository::open(iter_repo), iter_branch, repetitions);
      result.project = fs::path(iter_repo).filename().string();
      std::cout << bench_csv_header() << "\n" << bench_csv_row(result) << "\n";
      return 0;
    }
    if (mining->parsed()) {
      MetricRegistry registry;
      register_builtin_metrics(registry);
      const Repository repo = Repository::open(mine_repo);
      std::cout << bench_csv_header() << "\n";
      for (const int w : workers) {
        auto result =
            bench_mining(repo, registry, mine_metric, mine_branch, w, !no_cache, mine_reps);
        result.project = fs::path(mine_repo).filename().string();
        std::cout << bench_csv_row(result) << "\n";
      }
      return 0;
    }
    if (suite->parsed()) return run_suite(workdir, suite_reps);
  } catch (const std::exception& e) {
    std::cerr << "miner-bench: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
