// miner - pipeline-oriented git repository mining CLI
//
//   miner branch REPO | miner commits REPO | miner analyze REPO loc > out.jsonl

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "miner/engine/analyze.hpp"
#include "miner/error.hpp"
#include "miner/git/repository.hpp"
#include "miner/jsonl.hpp"
#include "miner/manifest.hpp"
#include "miner/traversal.hpp"

namespace {

using namespace miner;

std::vector<std::string> read_stdin_lines() {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

int cmd_clone(const std::string& url, const std::string& path) {
  try {
    Repository::clone_bare(url, path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "miner clone: " << e.what() << "\n";
    return 1;
  }
}

int cmd_branch(const std::string& repo_path, bool local, bool remote) {
  try {
    const Repository repo = Repository::open(repo_path);
    for (const auto& name : list_branches(repo, local, remote)) std::cout << name << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "miner branch: " << e.what() << "\n";
    return 1;
  }
}

int cmd_commits(const std::string& repo_path, const WalkOptions& options) {
  try {
    const Repository repo = Repository::open(repo_path);
    const std::vector<std::string> branches = read_stdin_lines();
    for (const auto& id : walk_commits(repo, branches, options)) std::cout << id.hex() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "miner commits: " << e.what() << "\n";
    return 1;
  }
}

struct AnalyzeArgs {
  std::string repo_path;
  std::vector<std::string> metric_names;
  std::string custom_metrics;
  int workers = 1;
  bool preserve_order = false;
  bool no_cache = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  MetricRegistry registry;
  register_builtin_metrics(registry);
  try {
    if (!args.custom_metrics.empty()) load_custom_metrics(args.custom_metrics, registry);
  } catch (const std::exception& e) {
    std::cerr << "miner analyze: " << e.what() << "\n";
    return 1;
  }

  // requested order, first occurrence wins
  std::vector<const RegisteredMetric*> metrics;
  for (const auto& name : args.metric_names) {
    if (!registry.contains(name)) {
      std::cerr << "miner analyze: unknown metric '" << name << "'; known metrics:";
      for (const auto& known : registry.names()) std::cerr << " " << known;
      std::cerr << "\n";
      return 1;
    }
    const RegisteredMetric* metric = &registry.resolve(name);
    if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end())
      metrics.push_back(metric);
  }

  std::vector<ObjectId> ids;
  for (const auto& line : read_stdin_lines()) {
    const auto id = ObjectId::try_from_hex(line);
    if (!id) {
      std::cerr << "miner analyze: '" << line << "' is not a 40-hex commit id\n";
      return 1;
    }
    ids.push_back(*id);
  }
  if (ids.empty()) return 0;

  try {
    const Repository repo = Repository::open(args.repo_path);
    EngineOptions options;
    options.workers = args.workers;
    options.preserve_input_order = args.preserve_order;
    options.cache_enabled = !args.no_cache;
    const std::size_t task_errors =
        analyze_stream(repo, ids, metrics, options, [](CommitRecord&& record) {
          std::cout << record_to_jsonl(record) << "\n";
        });
    std::cout.flush();
    return task_errors > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "miner analyze: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"time- and space-efficient git repository mining"};
  app.require_subcommand(1);

  auto* clone = app.add_subcommand("clone", "clone a bare repository from a URL");
  std::string clone_url, clone_path;
  clone->add_option("url", clone_url, "git remote URL or local path")->required();
  clone->add_option("path", clone_path, "destination directory")->required();

  auto* branch = app.add_subcommand("branch", "list branches of a repository");
  std::string branch_repo;
  bool include_local = true, include_remote = false;
  branch->add_option("repository", branch_repo, "path to the repository")->required();
  branch->add_flag("--local,!--no-local", include_local, "include local branches");
  branch->add_flag("--remote,!--no-remote", include_remote, "include remote branches");

  auto* commits = app.add_subcommand(
      "commits", "list commit ids reachable from the branch names on stdin");
  std::string commits_repo;
  WalkOptions walk;
  std::uint64_t limit = 0;
  commits->add_option("repository", commits_repo, "path to the repository")->required();
  commits->add_flag("--simplify-first-parent,!--no-simplify-first-parent", walk.first_parent,
                    "follow only the first parent of merges");
  commits->add_flag("--drop-duplicates,!--keep-duplicates", walk.dedup,
                    "emit each commit once across branches");
  commits->add_flag("--sort,!--no-sort", walk.topo_order, "topological order, children first");
  auto* limit_opt = commits->add_option("--limit", limit, "emit only the first N commits");

  auto* analyze =
      app.add_subcommand("analyze", "analyze the commit ids on stdin, one JSONL record each");
  AnalyzeArgs analyze_args;
  analyze->add_option("repository", analyze_args.repo_path, "path to the repository")->required();
  analyze->add_option("metrics", analyze_args.metric_names, "metric names to compute");
  analyze->add_option("--custom-metrics", analyze_args.custom_metrics,
                      "JSON manifest of external-process metrics");
  analyze->add_option("--workers", analyze_args.workers, "number of analysis workers")
      ->check(CLI::PositiveNumber);
  analyze->add_flag("--preserve-order", analyze_args.preserve_order,
                    "emit records in stdin order instead of completion order");
  analyze->add_flag("--no-cache", analyze_args.no_cache, "recompute every metric value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (clone->parsed()) return cmd_clone(clone_url, clone_path);
  if (branch->parsed()) return cmd_branch(branch_repo, include_local, include_remote);
  if (commits->parsed()) {
    if (limit_opt->count() > 0) {
      if (limit == 0) {
        std::cerr << "miner commits: --limit must be at least 1\n";
        return 1;
      }
      walk.limit = limit;
    }
    return cmd_commits(commits_repo, walk);
  }
  if (analyze->parsed()) return cmd_analyze(analyze_args);
  return 1;
}
