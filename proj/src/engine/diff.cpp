#include "miner/engine/diff.hpp"

#include <algorithm>
#include <cstring>

namespace miner {
namespace {

bool entry_is_dir(const Repository::TreeEntry& e) { return (e.mode & 0170000) == 0040000; }
bool entry_is_blob(const Repository::TreeEntry& e) { return (e.mode & 0170000) == 0100000; }

// git's tree-entry ordering: directory names compare as "name/".
int entry_name_compare(const Repository::TreeEntry& a, const Repository::TreeEntry& b) {
  const std::size_t len = std::min(a.name.size(), b.name.size());
  const int cmp = std::memcmp(a.name.data(), b.name.data(), len);
  if (cmp != 0) return cmp;
  unsigned char ca = len < a.name.size() ? static_cast<unsigned char>(a.name[len])
                                         : (entry_is_dir(a) ? '/' : 0);
  unsigned char cb = len < b.name.size() ? static_cast<unsigned char>(b.name[len])
                                         : (entry_is_dir(b) ? '/' : 0);
  return int(ca) - int(cb);
}

void add_all_blobs(const Repository& repo, const ObjectId& tree_id, const std::string& prefix,
                   std::vector<TreeBlobRef>& out) {
  repo.for_each_blob(tree_id, [&](const TreeBlobRef& ref) {
    out.push_back(TreeBlobRef{ref.id, prefix + ref.path, ref.mode});
  });
}

// Two-pointer walk over both sorted entry lists. Subtrees with equal ids
// are skipped wholesale; that is what makes change-based analysis cheap.
void diff_trees(const Repository& repo, const ObjectId& old_tree, const ObjectId& new_tree,
                const std::string& prefix, std::vector<TreeBlobRef>& out) {
  if (old_tree == new_tree) return;
  const std::vector<Repository::TreeEntry> old_entries = repo.read_tree(old_tree);
  const std::vector<Repository::TreeEntry> new_entries = repo.read_tree(new_tree);

  std::size_t i = 0, j = 0;
  while (i < old_entries.size() || j < new_entries.size()) {
    int cmp;
    if (i >= old_entries.size())
      cmp = 1;
    else if (j >= new_entries.size())
      cmp = -1;
    else
      cmp = entry_name_compare(old_entries[i], new_entries[j]);

    if (cmp < 0) {  // only in the parent: a deletion, nothing to analyze
      ++i;
    } else if (cmp > 0) {  // only in the commit: added
      const auto& e = new_entries[j];
      if (entry_is_dir(e))
        add_all_blobs(repo, e.id, prefix + e.name + "/", out);
      else if (entry_is_blob(e))
        out.push_back(TreeBlobRef{e.id, prefix + e.name, e.mode});
      ++j;
    } else {
      const auto& oe = old_entries[i];
      const auto& ne = new_entries[j];
      if (entry_is_dir(ne)) {
        if (oe.id != ne.id) diff_trees(repo, oe.id, ne.id, prefix + ne.name + "/", out);
      } else if (entry_is_blob(ne) && (oe.id != ne.id || oe.mode != ne.mode)) {
        out.push_back(TreeBlobRef{ne.id, prefix + ne.name, ne.mode});
      }
      ++i;
      ++j;
    }
  }
}

}  // namespace

void for_each_touched_blob(const Repository& repo, const CommitInfo& commit,
                           const std::function<void(const TreeBlobRef&)>& fn) {
  std::vector<TreeBlobRef> out;
  if (commit.parent_ids.empty()) {
    add_all_blobs(repo, commit.tree_id, "", out);
  } else {
    const CommitInfo parent = repo.read_commit(commit.parent_ids[0]);
    diff_trees(repo, parent.tree_id, commit.tree_id, "", out);
  }
  std::sort(out.begin(), out.end(),
            [](const TreeBlobRef& a, const TreeBlobRef& b) { return a.path < b.path; });
  for (const auto& ref : out) fn(ref);
}

std::vector<BlobEntry> touched_blobs(const Repository& repo, const CommitInfo& commit) {
  std::vector<BlobEntry> entries;
  for_each_touched_blob(repo, commit, [&](const TreeBlobRef& ref) {
    const std::string content = repo.read_blob(ref.id);
    entries.push_back(BlobEntry{ref.id, ref.path, content.size(),
                                Repository::blob_looks_binary(content)});
  });
  return entries;
}

}  // namespace miner
