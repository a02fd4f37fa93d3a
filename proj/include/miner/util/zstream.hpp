#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace miner {

// Inflates a whole zlib stream. size_hint, when known, avoids regrowth.
std::string zlib_inflate(const unsigned char* src, std::size_t len, std::size_t size_hint = 0);

// Inflates at most max_out bytes and stops; enough for object headers.
std::string zlib_inflate_prefix(const unsigned char* src, std::size_t len, std::size_t max_out);

// Inflates a stream embedded at src whose decompressed size is known exactly
// (packfile entries). Returns the decompressed bytes.
std::string zlib_inflate_exact(const unsigned char* src, std::size_t len, std::size_t out_size);

}  // namespace miner
