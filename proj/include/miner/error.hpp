// Error taxonomy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace miner {

enum class Errc {
  destination_not_empty,
  remote_unreachable,
  not_a_git_repository,
  object_not_found,
  object_not_a_commit,
  object_not_a_blob,
  object_not_a_tree,
  corrupt_object,
  unknown_branch,
  spawn_failure,
  nonzero_exit,
  invalid_json_output,
  metric_timeout,
  duplicate_metric_name,
  unknown_metric_name,
  malformed_manifest,
  io_failure,
  path_collision,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace miner
