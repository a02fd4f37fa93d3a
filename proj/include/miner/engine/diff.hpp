#pragma once

#include <functional>
#include <vector>

#include "miner/git/repository.hpp"

namespace miner {

// Walks the blobs a commit touched relative to its first parent: added and
// modified entries, in byte-ascending path order. A root commit touches its
// whole tree; merges diff against parent 0 only; deletions contribute
// nothing. No rename detection, matching `git diff-tree --no-renames`.
void for_each_touched_blob(const Repository& repo, const CommitInfo& commit,
                           const std::function<void(const TreeBlobRef&)>& fn);

// Same set with sizes and binary flags filled in.
std::vector<BlobEntry> touched_blobs(const Repository& repo, const CommitInfo& commit);

}  // namespace miner
