#pragma once

#include <filesystem>

#include "miner/git/repository.hpp"

namespace miner {

enum class MaterializeSubset { full_tree, touched_only };

// Writes the selected blobs of a commit under dest using their repo
// relative paths; contents are byte-identical to the stored blobs. dest
// must be absent or an empty directory; the caller removes it afterwards.
// On case-insensitive filesystems two paths may land on the same file,
// which is reported as Error(path_collision).
std::filesystem::path materialize(const Repository& repo, const CommitInfo& commit,
                                  MaterializeSubset subset, const std::filesystem::path& dest);

}  // namespace miner
