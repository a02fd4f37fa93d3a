#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miner {

struct RunOptions {
  std::optional<std::chrono::milliseconds> timeout;  // kill the process group when exceeded
  std::size_t max_stdout_bytes = 1ULL << 30;         // collection cap; exceeding sets truncated
  std::optional<std::filesystem::path> cwd;
};

struct ProcessResult {
  int exit_code = -1;   // -1 when killed by a signal
  bool timed_out = false;
  bool stdout_truncated = false;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0 && !timed_out && !stdout_truncated; }
};

// Spawns argv[0] with the given arguments, feeds stdin_data to the child,
// and collects stdout/stderr to completion. Throws Error(spawn_failure) if
// the executable cannot be started at all.
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view stdin_data = {},
                          const RunOptions& options = {});

}  // namespace miner
