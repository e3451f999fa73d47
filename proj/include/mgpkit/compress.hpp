#pragma once

// Compressed length as a computable upper bound on description length.
//
// The compressor is zlib deflate with fixed parameters (level 9, 32 KiB
// window, memLevel 9, default strategy). Output length depends only on the
// input bytes and the zlib version, which is part of the identity string.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgpkit {

/// e.g. "zlib-1.2.11/deflate-9/w15/m9"
std::string compressor_identity();

std::vector<std::uint8_t> compress_bytes(std::span<const std::uint8_t> data);

/// 8 * compressed length; never zero (the zlib container alone costs bytes).
std::size_t compress_bits(std::span<const std::uint8_t> data);

/// Normalized compression distance, averaged over both concatenation orders
/// and clamped to [0, 1.1]. Throws Error(Argument) on empty input.
double ncd(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace mgpkit
