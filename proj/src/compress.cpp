#include "mgpkit/compress.hpp"

#include <zlib.h>

#include <algorithm>

#include "mgpkit/error.hpp"

namespace mgpkit {

namespace {
constexpr int kLevel = 9;
constexpr int kWindowBits = 15;
constexpr int kMemLevel = 9;
}  // namespace

std::string compressor_identity() {
  return std::string("zlib-") + zlibVersion() + "/deflate-" + std::to_string(kLevel) + "/w" +
         std::to_string(kWindowBits) + "/m" + std::to_string(kMemLevel);
}

std::vector<std::uint8_t> compress_bytes(std::span<const std::uint8_t> data) {
  z_stream zs{};
  if (deflateInit2(&zs, kLevel, Z_DEFLATED, kWindowBits, kMemLevel, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error(ErrorKind::Io, "deflateInit2 failed");
  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::Io, "deflate did not finish");
  out.resize(produced);
  return out;
}

std::size_t compress_bits(std::span<const std::uint8_t> data) { return 8 * compress_bytes(data).size(); }

double ncd(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::Argument, "ncd needs two nonempty inputs");
  const double ca = static_cast<double>(compress_bits(a));
  const double cb = static_cast<double>(compress_bits(b));
  std::vector<std::uint8_t> ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  std::vector<std::uint8_t> ba(b.begin(), b.end());
  ba.insert(ba.end(), a.begin(), a.end());
  const double cab = static_cast<double>(compress_bits(ab));
  const double cba = static_cast<double>(compress_bits(ba));
  const double lo = std::min(ca, cb), hi = std::max(ca, cb);
  const double d = ((cab - lo) / hi + (cba - lo) / hi) / 2.0;
  return std::clamp(d, 0.0, 1.1);
}

}  // namespace mgpkit
