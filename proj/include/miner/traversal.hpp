#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "miner/git/repository.hpp"

namespace miner {

struct WalkOptions {
  bool first_parent = true;  // follow only parent 0 of merges
  bool dedup = true;         // emit each commit at most once across branches
  bool topo_order = true;    // children before any walked ancestor
  std::optional<std::uint64_t> limit;  // prefix of the final stream
};

// Branch names: local names bare ("main"), remote names "<remote>/<branch>",
// both sorted byte-wise ascending.
std::vector<std::string> list_branches(const Repository& repo, bool include_local,
                                       bool include_remote);

// Resolves a branch-ish name (local branch, remote branch, tag, or 40-hex
// id) and peels it to a commit. Throws Error(unknown_branch).
ObjectId resolve_branch(const Repository& repo, const std::string& name);

std::vector<ObjectId> walk_commits(const Repository& repo, std::span<const std::string> branches,
                                   const WalkOptions& opts = {});

}  // namespace miner
