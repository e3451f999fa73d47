#pragma once

// Word-parallel bitset kernels used by the state-space search.
//
// Every variant (scalar, AVX2, NEON) must produce bit-identical results; the
// scalar table is the reference and the others are equivalence-tested
// against it. The active table is picked once at startup from CPU features
// and can be forced with MGPKIT_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace mgpkit::simd {

using Word = std::uint64_t;

/// Structure-of-arrays action table. Row i of each mask starts at
/// i * words. All four arrays hold count * words entries.
struct ActionTableView {
  const Word* pre_pos = nullptr;
  const Word* pre_neg = nullptr;
  const Word* add = nullptr;
  const Word* del = nullptr;
  std::size_t words = 0;
  std::size_t count = 0;
};

struct KernelSet {
  std::string_view name;

  /// (state & pos) == pos && (state & neg) == 0
  bool (*applicable)(const Word* state, const Word* pos, const Word* neg,
                     std::size_t words);

  /// out = (state & ~del) | add. `out` may alias `state`.
  void (*apply)(const Word* state, const Word* del, const Word* add, Word* out,
                std::size_t words);

  /// Writes the indices of every applicable row, ascending, into `out`
  /// (capacity >= table.count) and returns how many were written.
  std::size_t (*applicable_batch)(const Word* state, const ActionTableView& table,
                                  std::uint32_t* out);

  /// (a & b) == a
  bool (*subset)(const Word* a, const Word* b, std::size_t words);
};

const KernelSet& scalar_kernels();

/// Variants compiled into this build and supported by the running CPU.
std::vector<const KernelSet*> available_kernels();

/// The table used by the planner.
const KernelSet& active_kernels();

/// FNV-style mix over the words. Scalar everywhere; hashing only affects
/// table layout, never output order.
std::uint64_t hash_words(const Word* words, std::size_t count);

}  // namespace mgpkit::simd
