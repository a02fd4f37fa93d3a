#include "pack.hpp"

#include <cstring>

#include "miner/error.hpp"
#include "miner/util/zstream.hpp"

namespace miner {
namespace {

std::uint32_t read_be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

std::uint64_t read_be64(const unsigned char* p) {
  return (std::uint64_t(read_be32(p)) << 32) | read_be32(p + 4);
}

ObjectType type_from_code(int code) {
  switch (code) {
    case 1: return ObjectType::commit;
    case 2: return ObjectType::tree;
    case 3: return ObjectType::blob;
    case 4: return ObjectType::tag;
    default: raise(Errc::corrupt_object, "unexpected pack object type " + std::to_string(code));
  }
}

// Delta payload: two little-endian base-128 sizes, then copy/insert opcodes.
std::uint64_t parse_varint_le(const std::string& buf, std::size_t& pos) {
  std::uint64_t value = 0;
  int shift = 0;
  for (;;) {
    if (pos >= buf.size()) raise(Errc::corrupt_object, "truncated delta header");
    const unsigned char c = static_cast<unsigned char>(buf[pos++]);
    value |= std::uint64_t(c & 0x7f) << shift;
    if ((c & 0x80) == 0) return value;
    shift += 7;
  }
}

std::string apply_delta(const std::string& base, const std::string& delta) {
  std::size_t pos = 0;
  const std::uint64_t expect_base = parse_varint_le(delta, pos);
  const std::uint64_t target_size = parse_varint_le(delta, pos);
  if (expect_base != base.size()) raise(Errc::corrupt_object, "delta base size mismatch");

  std::string out;
  out.reserve(target_size);
  while (pos < delta.size()) {
    const unsigned char op = static_cast<unsigned char>(delta[pos++]);
    if (op & 0x80) {  // copy from base
      std::uint64_t cp_off = 0, cp_size = 0;
      for (int i = 0; i < 4; ++i)
        if (op & (1u << i)) cp_off |= std::uint64_t(static_cast<unsigned char>(delta.at(pos++))) << (8 * i);
      for (int i = 0; i < 3; ++i)
        if (op & (0x10u << i)) cp_size |= std::uint64_t(static_cast<unsigned char>(delta.at(pos++))) << (8 * i);
      if (cp_size == 0) cp_size = 0x10000;
      if (cp_off + cp_size > base.size()) raise(Errc::corrupt_object, "delta copy out of range");
      out.append(base, cp_off, cp_size);
    } else if (op != 0) {  // insert literal bytes
      if (pos + op > delta.size()) raise(Errc::corrupt_object, "delta insert out of range");
      out.append(delta, pos, op);
      pos += op;
    } else {
      raise(Errc::corrupt_object, "delta opcode 0");
    }
  }
  if (out.size() != target_size) raise(Errc::corrupt_object, "delta target size mismatch");
  return out;
}

}  // namespace

PackFile::PackFile(const std::filesystem::path& idx_path, const std::filesystem::path& pack_path)
    : idx_(idx_path), pack_(pack_path) {
  if (idx_.size() < 8 + 256 * 4) raise(Errc::corrupt_object, "pack index too small");
  const unsigned char* p = idx_.data();
  if (read_be32(p) != 0xff744f63u || read_be32(p + 4) != 2)
    raise(Errc::corrupt_object, "unsupported pack index version (only v2 is read)");
  const unsigned char* fanout = p + 8;
  count_ = read_be32(fanout + 255 * 4);
  oid_table_ = fanout + 256 * 4;
  const unsigned char* crc_table = oid_table_ + std::size_t(count_) * 20;
  off_table_ = crc_table + std::size_t(count_) * 4;
  off64_table_ = off_table_ + std::size_t(count_) * 4;
  if (pack_.size() < 12 || std::memcmp(pack_.data(), "PACK", 4) != 0)
    raise(Errc::corrupt_object, "bad pack header");
}

std::optional<std::uint64_t> PackFile::find_offset(const ObjectId& id) const {
  const unsigned char* fanout = idx_.data() + 8;
  const unsigned char first = id.raw()[0];
  std::uint32_t lo = first == 0 ? 0 : read_be32(fanout + std::size_t(first - 1) * 4);
  std::uint32_t hi = read_be32(fanout + std::size_t(first) * 4);
  while (lo < hi) {
    const std::uint32_t mid = lo + (hi - lo) / 2;
    const int cmp = std::memcmp(id.raw().data(), oid_table_ + std::size_t(mid) * 20, 20);
    if (cmp == 0) {
      const std::uint32_t off = read_be32(off_table_ + std::size_t(mid) * 4);
      if (off & 0x80000000u) return read_be64(off64_table_ + std::size_t(off & 0x7fffffffu) * 8);
      return off;
    }
    if (cmp < 0)
      hi = mid;
    else
      lo = mid + 1;
  }
  return std::nullopt;
}

PackFile::EntryInfo PackFile::parse_entry(std::uint64_t offset) const {
  if (offset >= pack_.size()) raise(Errc::corrupt_object, "pack offset out of range");
  const unsigned char* p = pack_.data();
  std::uint64_t pos = offset;
  const auto next_byte = [&] {
    if (pos >= pack_.size()) raise(Errc::corrupt_object, "truncated pack entry header");
    return p[pos++];
  };
  unsigned char c = next_byte();
  EntryInfo info{};
  info.type_code = (c >> 4) & 0x07;
  std::uint64_t size = c & 0x0f;
  int shift = 4;
  while (c & 0x80) {
    c = next_byte();
    size |= std::uint64_t(c & 0x7f) << shift;
    shift += 7;
  }
  info.size = size;
  if (info.type_code == 6) {  // ofs-delta: distance back to the base entry
    c = next_byte();
    std::uint64_t off = c & 0x7f;
    while (c & 0x80) {
      c = next_byte();
      off = ((off + 1) << 7) | (c & 0x7f);
    }
    if (off > offset) raise(Errc::corrupt_object, "ofs-delta before pack start");
    info.base_offset = offset - off;
  } else if (info.type_code == 7) {  // ref-delta
    if (pos + 20 > pack_.size()) raise(Errc::corrupt_object, "truncated ref-delta");
    info.base_id = ObjectId::from_raw(p + pos);
    pos += 20;
  } else if (info.type_code < 1 || info.type_code > 4) {
    raise(Errc::corrupt_object, "bad pack entry type");
  }
  info.data_pos = pos;
  return info;
}

RawObject PackFile::resolve(std::uint64_t offset, const ObjectDatabase& odb, int depth) const {
  if (depth > 10000) raise(Errc::corrupt_object, "delta chain too deep");
  const EntryInfo info = parse_entry(offset);
  if (info.type_code >= 1 && info.type_code <= 4) {
    return RawObject{type_from_code(info.type_code),
                     zlib_inflate_exact(pack_.data() + info.data_pos, pack_.size() - info.data_pos,
                                        info.size)};
  }

  std::shared_ptr<const RawObject> base;
  std::optional<std::uint64_t> base_off;
  if (info.type_code == 6) {
    base_off = info.base_offset;
  } else {
    base_off = find_offset(info.base_id);  // usually in the same pack
  }
  if (base_off) {
    {
      std::lock_guard lock(cache_mutex_);
      auto it = base_cache_.find(*base_off);
      if (it != base_cache_.end()) base = it->second;
    }
    if (!base) {
      base = std::make_shared<const RawObject>(resolve(*base_off, odb, depth + 1));
      std::lock_guard lock(cache_mutex_);
      if (base_cache_bytes_ > 64 * 1024 * 1024) {
        base_cache_.clear();
        base_cache_bytes_ = 0;
      }
      base_cache_bytes_ += base->data.size();
      base_cache_.emplace(*base_off, base);
    }
  } else {
    base = std::make_shared<const RawObject>(odb.read(info.base_id));
  }

  const std::string delta =
      zlib_inflate_exact(pack_.data() + info.data_pos, pack_.size() - info.data_pos, info.size);
  return RawObject{base->type, apply_delta(base->data, delta)};
}

RawObject PackFile::read_at(std::uint64_t offset, const ObjectDatabase& odb) const {
  return resolve(offset, odb, 0);
}

ObjectHeader PackFile::header_at(std::uint64_t offset, const ObjectDatabase& odb) const {
  // Walk the delta chain for the type; the size comes from the outermost
  // delta's target-size field, so only a few bytes get inflated.
  const EntryInfo info = parse_entry(offset);
  if (info.type_code >= 1 && info.type_code <= 4)
    return ObjectHeader{type_from_code(info.type_code), info.size};

  const std::string prefix =
      zlib_inflate_prefix(pack_.data() + info.data_pos, pack_.size() - info.data_pos, 32);
  std::size_t pos = 0;
  parse_varint_le(prefix, pos);                              // base size
  const std::uint64_t target = parse_varint_le(prefix, pos);  // target size

  ObjectType type;
  if (info.type_code == 6) {
    type = header_at(info.base_offset, odb).type;
  } else {
    auto base_off = find_offset(info.base_id);
    type = base_off ? header_at(*base_off, odb).type : odb.read_header(info.base_id).type;
  }
  return ObjectHeader{type, target};
}

}  // namespace miner
