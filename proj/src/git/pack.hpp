// Packfile and pack-index readers (idx v2, ofs/ref deltas).
#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "miner/git/mapped_file.hpp"
#include "miner/git/object_id.hpp"
#include "miner/git/odb.hpp"

namespace miner {

class PackFile {
 public:
  PackFile(const std::filesystem::path& idx_path, const std::filesystem::path& pack_path);

  std::optional<std::uint64_t> find_offset(const ObjectId& id) const;
  RawObject read_at(std::uint64_t offset, const ObjectDatabase& odb) const;
  ObjectHeader header_at(std::uint64_t offset, const ObjectDatabase& odb) const;

 private:
  struct EntryInfo {
    int type_code;            // 1..4 full objects, 6 ofs-delta, 7 ref-delta
    std::uint64_t size;       // inflated payload size (delta payload for deltas)
    std::uint64_t data_pos;   // offset of the zlib stream
    std::uint64_t base_offset = 0;  // ofs-delta
    ObjectId base_id;               // ref-delta
  };

  EntryInfo parse_entry(std::uint64_t offset) const;
  RawObject resolve(std::uint64_t offset, const ObjectDatabase& odb, int depth) const;

  MappedFile idx_;
  MappedFile pack_;
  std::uint32_t count_ = 0;
  const unsigned char* oid_table_ = nullptr;
  const unsigned char* off_table_ = nullptr;
  const unsigned char* off64_table_ = nullptr;

  // Delta bases get re-used heavily inside one pack; a small shared cache
  // keeps chain resolution from going quadratic.
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const RawObject>> base_cache_;
  mutable std::size_t base_cache_bytes_ = 0;
};

}  // namespace miner
