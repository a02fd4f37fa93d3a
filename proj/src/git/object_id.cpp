#include "miner/git/object_id.hpp"

#include <stdexcept>

namespace miner {
namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;  // uppercase is rejected on purpose: ids are canonical lowercase
}

}  // namespace

std::optional<ObjectId> ObjectId::try_from_hex(std::string_view hex) {
  if (hex.size() != 40) return std::nullopt;
  ObjectId id;
  for (std::size_t i = 0; i < 20; ++i) {
    const int hi = hex_nibble(hex[2 * i]);
    const int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    id.raw_[i] = static_cast<unsigned char>((hi << 4) | lo);
  }
  return id;
}

ObjectId ObjectId::from_hex(std::string_view hex) {
  auto id = try_from_hex(hex);
  if (!id) throw std::invalid_argument("not a 40-char lowercase hex object id: " + std::string(hex));
  return *id;
}

ObjectId ObjectId::from_raw(const unsigned char* bytes20) {
  ObjectId id;
  for (std::size_t i = 0; i < 20; ++i) id.raw_[i] = bytes20[i];
  return id;
}

std::string ObjectId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(40, '0');
  for (std::size_t i = 0; i < 20; ++i) {
    out[2 * i] = digits[raw_[i] >> 4];
    out[2 * i + 1] = digits[raw_[i] & 0x0f];
  }
  return out;
}

bool ObjectId::is_zero() const {
  for (auto b : raw_)
    if (b != 0) return false;
  return true;
}

}  // namespace miner
