#include "mgpkit/simd/kernels.hpp"

namespace mgpkit::simd {
namespace {

bool applicable_scalar(const Word* state, const Word* pos, const Word* neg,
                       std::size_t words) {
  Word bad = 0;
  for (std::size_t i = 0; i < words; ++i) {
    bad |= (state[i] & pos[i]) ^ pos[i];
    bad |= state[i] & neg[i];
  }
  return bad == 0;
}

void apply_scalar(const Word* state, const Word* del, const Word* add, Word* out,
                  std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) out[i] = (state[i] & ~del[i]) | add[i];
}

std::size_t applicable_batch_scalar(const Word* state, const ActionTableView& t,
                                    std::uint32_t* out) {
  std::size_t n = 0;
  for (std::size_t a = 0; a < t.count; ++a) {
    const std::size_t off = a * t.words;
    if (applicable_scalar(state, t.pre_pos + off, t.pre_neg + off, t.words))
      out[n++] = static_cast<std::uint32_t>(a);
  }
  return n;
}

bool subset_scalar(const Word* a, const Word* b, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i)
    if ((a[i] & b[i]) != a[i]) return false;
  return true;
}

constexpr KernelSet kScalar{"scalar", applicable_scalar, apply_scalar,
                            applicable_batch_scalar, subset_scalar};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

std::uint64_t hash_words(const Word* words, std::size_t count) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t w = words[i];
    w ^= w >> 33;
    w *= 0xff51afd7ed558ccdULL;
    w ^= w >> 33;
    h = (h ^ w) * 0x100000001b3ULL;
  }
  h ^= h >> 29;
  return h;
}

}  // namespace mgpkit::simd
