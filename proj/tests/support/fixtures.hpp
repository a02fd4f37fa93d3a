// Shared helpers for tests: scratch directories, git fixture repositories
// built with the system git binary (the oracle throughout), and small
// conveniences for running the built CLI.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "miner/util/subprocess.hpp"

namespace testsupport {

namespace fs = std::filesystem;

// A unique directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "miner-test") {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& sub) const { return path_ / sub; }

 private:
  fs::path path_;
};

// Runs git with fixed author/committer identity and fails loudly.
inline std::string git(const std::vector<std::string>& args, const fs::path& cwd) {
  std::vector<std::string> argv{"git",
                                "-c", "user.name=Fixture",
                                "-c", "user.email=fixture@example.invalid",
                                "-c", "init.defaultBranch=main",
                                "-c", "protocol.file.allow=always",
                                "-c", "core.autocrlf=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  miner::RunOptions options;
  options.cwd = cwd;
  const miner::ProcessResult result = miner::run_process(argv, {}, options);
  if (result.exit_code != 0) {
    std::string cmd;
    for (const auto& a : args) cmd += a + " ";
    throw std::runtime_error("git " + cmd + "failed: " + result.err);
  }
  std::string out = result.out;
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

inline void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// Working-clone fixture: init, then commit() snapshots the current files.
class FixtureRepo {
 public:
  explicit FixtureRepo(const fs::path& dir) : dir_(dir) {
    fs::create_directories(dir_);
    git({"init", "--quiet", "."}, dir_);
  }

  const fs::path& dir() const { return dir_; }

  void write(const std::string& rel, const std::string& content) {
    write_file(dir_ / rel, content);
  }

  std::string commit(const std::string& message,
                     const std::string& date = "2021-01-01T10:00:00 +0000") {
    git({"add", "-A", "."}, dir_);
    git({"-c", "commit.gpgsign=false", "commit", "--quiet", "--allow-empty", "-m", message,
         "--date", date},
        dir_);
    return git({"rev-parse", "HEAD"}, dir_);
  }

  std::string run(const std::vector<std::string>& args) { return git(args, dir_); }

 private:
  fs::path dir_;
};

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

inline miner::ProcessResult run_miner(const std::vector<std::string>& args,
                                      std::string_view stdin_data = {}) {
  std::vector<std::string> argv{MINER_BIN};
  argv.insert(argv.end(), args.begin(), args.end());
  return miner::run_process(argv, stdin_data);
}

}  // namespace testsupport
