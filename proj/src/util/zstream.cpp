#include "miner/util/zstream.hpp"

#include <zlib.h>

#include "miner/error.hpp"

namespace miner {
namespace {

class InflateStream {
 public:
  InflateStream(const unsigned char* src, std::size_t len) {
    stream_.next_in = const_cast<Bytef*>(src);
    stream_.avail_in = static_cast<uInt>(len);
    if (inflateInit(&stream_) != Z_OK) raise(Errc::corrupt_object, "inflateInit failed");
  }
  ~InflateStream() { inflateEnd(&stream_); }

  InflateStream(const InflateStream&) = delete;
  InflateStream& operator=(const InflateStream&) = delete;

  // Inflates into out until the stream ends, out is full, or input runs dry.
  // Returns true when the zlib stream reached its end marker.
  bool run(std::string& out, std::size_t target_size) {
    while (out.size() < target_size) {
      const std::size_t old = out.size();
      const std::size_t want = std::min<std::size_t>(target_size - old, 256 * 1024);
      out.resize(old + want);
      stream_.next_out = reinterpret_cast<Bytef*>(out.data() + old);
      stream_.avail_out = static_cast<uInt>(want);
      const int rc = inflate(&stream_, Z_NO_FLUSH);
      out.resize(old + (want - stream_.avail_out));
      if (rc == Z_STREAM_END) return true;
      if (rc == Z_BUF_ERROR && stream_.avail_in == 0) return false;  // truncated input
      if (rc != Z_OK) raise(Errc::corrupt_object, "zlib inflate error");
      if (out.size() == old && stream_.avail_in == 0) return false;
    }
    return false;
  }

 private:
  z_stream stream_{};
};

}  // namespace

std::string zlib_inflate(const unsigned char* src, std::size_t len, std::size_t size_hint) {
  InflateStream in(src, len);
  std::string out;
  if (size_hint > 0) out.reserve(size_hint);
  std::size_t cap = size_hint > 0 ? size_hint : 16 * 1024;
  for (;;) {
    if (in.run(out, cap)) return out;
    if (out.size() < cap) raise(Errc::corrupt_object, "truncated zlib stream");
    cap *= 2;
  }
}

std::string zlib_inflate_prefix(const unsigned char* src, std::size_t len, std::size_t max_out) {
  InflateStream in(src, len);
  std::string out;
  in.run(out, max_out);
  return out;
}

std::string zlib_inflate_exact(const unsigned char* src, std::size_t len, std::size_t out_size) {
  InflateStream in(src, len);
  std::string out;
  out.reserve(out_size);
  const bool ended = in.run(out, out_size);
  if (out.size() != out_size) raise(Errc::corrupt_object, "zlib stream shorter than declared size");
  // A stream may legitimately need one more inflate call to see the end
  // marker; tolerate either, the size check above is what matters.
  (void)ended;
  return out;
}

}  // namespace miner
