#include "miner/git/odb.hpp"

#include <algorithm>
#include <cstring>

#include "miner/error.hpp"
#include "miner/util/zstream.hpp"
#include "pack.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

ObjectType type_from_name(std::string_view name) {
  if (name == "commit") return ObjectType::commit;
  if (name == "tree") return ObjectType::tree;
  if (name == "blob") return ObjectType::blob;
  if (name == "tag") return ObjectType::tag;
  raise(Errc::corrupt_object, "unknown object type '" + std::string(name) + "'");
}

// Loose objects start with "<type> <size>\0".
std::pair<ObjectType, std::uint64_t> parse_loose_header(const std::string& prefix,
                                                        std::size_t& header_len) {
  const std::size_t nul = prefix.find('\0');
  const std::size_t space = prefix.find(' ');
  if (nul == std::string::npos || space == std::string::npos || space > nul)
    raise(Errc::corrupt_object, "malformed loose object header");
  header_len = nul + 1;
  return {type_from_name(prefix.substr(0, space)),
          std::stoull(prefix.substr(space + 1, nul - space - 1))};
}

}  // namespace

const char* object_type_name(ObjectType type) {
  switch (type) {
    case ObjectType::commit: return "commit";
    case ObjectType::tree: return "tree";
    case ObjectType::blob: return "blob";
    case ObjectType::tag: return "tag";
  }
  return "?";
}

ObjectDatabase::ObjectDatabase(fs::path objects_dir) : objects_dir_(std::move(objects_dir)) {
  const fs::path pack_dir = objects_dir_ / "pack";
  std::error_code ec;
  if (!fs::is_directory(pack_dir, ec)) return;
  std::vector<fs::path> idx_files;
  for (const auto& entry : fs::directory_iterator(pack_dir, ec)) {
    if (entry.path().extension() == ".idx") idx_files.push_back(entry.path());
  }
  std::sort(idx_files.begin(), idx_files.end());
  for (const auto& idx : idx_files) {
    fs::path pack = idx;
    pack.replace_extension(".pack");
    if (fs::exists(pack, ec)) packs_.push_back(std::make_unique<PackFile>(idx, pack));
  }
}

ObjectDatabase::~ObjectDatabase() = default;

fs::path ObjectDatabase::loose_path(const ObjectId& id) const {
  const std::string hex = id.hex();
  return objects_dir_ / hex.substr(0, 2) / hex.substr(2);
}

bool ObjectDatabase::contains(const ObjectId& id) const {
  std::error_code ec;
  if (fs::exists(loose_path(id), ec)) return true;
  for (const auto& pack : packs_)
    if (pack->find_offset(id)) return true;
  return false;
}

RawObject ObjectDatabase::read(const ObjectId& id) const {
  std::error_code ec;
  const fs::path loose = loose_path(id);
  if (fs::exists(loose, ec)) {
    MappedFile file(loose);
    std::string raw = zlib_inflate(file.data(), file.size());
    std::size_t header_len = 0;
    auto [type, size] = parse_loose_header(raw, header_len);
    if (raw.size() - header_len != size)
      raise(Errc::corrupt_object, "loose object size mismatch for " + id.hex());
    return RawObject{type, raw.substr(header_len)};
  }
  for (const auto& pack : packs_) {
    if (auto offset = pack->find_offset(id)) return pack->read_at(*offset, *this);
  }
  raise(Errc::object_not_found, "object " + id.hex() + " not found");
}

ObjectHeader ObjectDatabase::read_header(const ObjectId& id) const {
  std::error_code ec;
  const fs::path loose = loose_path(id);
  if (fs::exists(loose, ec)) {
    MappedFile file(loose);
    const std::string prefix = zlib_inflate_prefix(file.data(), file.size(), 64);
    std::size_t header_len = 0;
    auto [type, size] = parse_loose_header(prefix, header_len);
    return ObjectHeader{type, size};
  }
  for (const auto& pack : packs_) {
    if (auto offset = pack->find_offset(id)) return pack->header_at(*offset, *this);
  }
  raise(Errc::object_not_found, "object " + id.hex() + " not found");
}

}  // namespace miner
