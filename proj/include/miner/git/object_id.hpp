#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace miner {

// 40-char lowercase hex SHA-1 naming a git object. Stored as the 20 raw
// bytes; the hex form is rendered on demand.
class ObjectId {
 public:
  ObjectId() = default;  // the all-zero id, used only as a sentinel

  static ObjectId from_hex(std::string_view hex);  // throws on bad input
  static std::optional<ObjectId> try_from_hex(std::string_view hex);
  static ObjectId from_raw(const unsigned char* bytes20);

  std::string hex() const;
  const std::array<unsigned char, 20>& raw() const { return raw_; }
  bool is_zero() const;

  auto operator<=>(const ObjectId&) const = default;

 private:
  std::array<unsigned char, 20> raw_{};
};

struct ObjectIdHash {
  std::size_t operator()(const ObjectId& id) const {
    // SHA-1 bytes are uniformly distributed; the first 8 are hash enough.
    std::uint64_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | id.raw()[static_cast<std::size_t>(i)];
    return static_cast<std::size_t>(h);
  }
};

}  // namespace miner
