// Loose and packed ref reading.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "miner/git/object_id.hpp"
#include "miner/git/repository.hpp"  // RefEntry

namespace miner {

class RefStore {
 public:
  explicit RefStore(std::filesystem::path git_dir);

  // Follows symbolic refs; returns nullopt when the ref does not exist.
  std::optional<ObjectId> resolve(const std::string& refname) const;

  // All direct (non-symbolic) refs under the prefix, loose refs shadowing
  // packed ones, sorted by name.
  std::vector<RefEntry> list(const std::string& prefix) const;

 private:
  std::optional<std::string> read_ref_file(const std::string& refname) const;
  std::optional<ObjectId> resolve_depth(const std::string& refname, int depth) const;
  std::vector<RefEntry> packed_refs() const;

  std::filesystem::path git_dir_;
};

}  // namespace miner
