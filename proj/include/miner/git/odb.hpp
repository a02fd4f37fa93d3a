#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "miner/git/object_id.hpp"

namespace miner {

enum class ObjectType { commit, tree, blob, tag };

const char* object_type_name(ObjectType type);

struct RawObject {
  ObjectType type;
  std::string data;  // full decompressed object payload, header stripped
};

struct ObjectHeader {
  ObjectType type;
  std::uint64_t size;
};

class PackFile;

// Reader over a repository's objects/ directory: loose objects plus every
// pack-*.idx/.pack pair found under objects/pack.
class ObjectDatabase {
 public:
  explicit ObjectDatabase(std::filesystem::path objects_dir);
  ~ObjectDatabase();

  ObjectDatabase(const ObjectDatabase&) = delete;
  ObjectDatabase& operator=(const ObjectDatabase&) = delete;

  bool contains(const ObjectId& id) const;
  RawObject read(const ObjectId& id) const;            // throws object_not_found
  ObjectHeader read_header(const ObjectId& id) const;  // type + size without full load

 private:
  friend class PackFile;
  std::filesystem::path loose_path(const ObjectId& id) const;

  std::filesystem::path objects_dir_;
  std::vector<std::unique_ptr<PackFile>> packs_;
};

}  // namespace miner
