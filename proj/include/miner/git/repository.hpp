#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "miner/git/object_id.hpp"
#include "miner/git/odb.hpp"

namespace miner {

struct Timestamp {
  std::int64_t seconds = 0;
  int tz_offset_minutes = 0;
};

struct Signature {
  std::string name;
  std::string email;
  Timestamp when;
};

struct CommitInfo {
  ObjectId id;
  std::vector<ObjectId> parent_ids;  // git parent order; [0] is the first parent
  ObjectId tree_id;
  Signature author;
  Signature committer;
  std::string message;
};

struct BlobEntry {
  ObjectId id;
  std::string path;  // repo-relative, slash-separated
  std::uint64_t size_bytes = 0;
  bool is_binary = false;
};

// A blob reference seen while walking a tree, before any content is loaded.
struct TreeBlobRef {
  ObjectId id;
  std::string path;
  std::uint32_t mode = 0;  // 0100644 or 0100755
};

struct RefEntry {
  std::string name;  // full ref name, e.g. "refs/heads/main"
  ObjectId target;
};

// Read-only handle onto a bare (or plain) repository's object database.
// Cheap to copy; copies share the same underlying database, and all read
// operations are safe to call concurrently from multiple workers.
class Repository {
 public:
  // Clones a bare, mirror-style copy of url into dest via the git binary.
  static Repository clone_bare(const std::string& url, const std::filesystem::path& dest);

  // Opens an existing repository; plain working clones resolve to their
  // .git database. Never writes.
  static Repository open(const std::filesystem::path& path);

  const std::filesystem::path& git_dir() const;

  CommitInfo read_commit(const ObjectId& id) const;
  std::string read_blob(const ObjectId& id) const;
  std::vector<BlobEntry> list_tree(const ObjectId& tree_id) const;

  // Depth-first walk over every blob under tree_id, without loading blob
  // contents. Paths arrive in byte-ascending order; symlinks and gitlinks
  // are skipped.
  void for_each_blob(const ObjectId& tree_id,
                     const std::function<void(const TreeBlobRef&)>& fn) const;

  // Entries of a single tree level, in stored order.
  struct TreeEntry {
    std::uint32_t mode;
    std::string name;
    ObjectId id;
  };
  std::vector<TreeEntry> read_tree(const ObjectId& tree_id) const;

  bool contains(const ObjectId& id) const;
  ObjectHeader object_header(const ObjectId& id) const;

  // Resolves a fully qualified ref; nullopt when absent.
  std::optional<ObjectId> resolve_ref(const std::string& refname) const;
  std::vector<RefEntry> list_refs(const std::string& prefix) const;

  // Follows tag objects until a commit is reached.
  ObjectId peel_to_commit(const ObjectId& id) const;

  static bool blob_looks_binary(std::string_view content);

 private:
  struct Impl;
  explicit Repository(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace miner
