#include <arm_neon.h>

#include "mgpkit/simd/kernels.hpp"

namespace mgpkit::simd {
namespace {

inline bool all_zero(uint64x2_t v) {
  return (vgetq_lane_u64(v, 0) | vgetq_lane_u64(v, 1)) == 0;
}

bool applicable_neon(const Word* state, const Word* pos, const Word* neg,
                     std::size_t words) {
  std::size_t i = 0;
  uint64x2_t bad = vdupq_n_u64(0);
  for (; i + 2 <= words; i += 2) {
    const uint64x2_t s = vld1q_u64(state + i);
    bad = vorrq_u64(bad, vbicq_u64(vld1q_u64(pos + i), s));
    bad = vorrq_u64(bad, vandq_u64(s, vld1q_u64(neg + i)));
  }
  Word tail = 0;
  for (; i < words; ++i) tail |= (~state[i] & pos[i]) | (state[i] & neg[i]);
  return all_zero(bad) && tail == 0;
}

void apply_neon(const Word* state, const Word* del, const Word* add, Word* out,
                std::size_t words) {
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2)
    vst1q_u64(out + i, vorrq_u64(vbicq_u64(vld1q_u64(state + i), vld1q_u64(del + i)),
                                 vld1q_u64(add + i)));
  for (; i < words; ++i) out[i] = (state[i] & ~del[i]) | add[i];
}

std::size_t applicable_batch_neon(const Word* state, const ActionTableView& t,
                                  std::uint32_t* out) {
  std::size_t n = 0;
  for (std::size_t a = 0; a < t.count; ++a) {
    const std::size_t off = a * t.words;
    if (applicable_neon(state, t.pre_pos + off, t.pre_neg + off, t.words))
      out[n++] = static_cast<std::uint32_t>(a);
  }
  return n;
}

bool subset_neon(const Word* a, const Word* b, std::size_t words) {
  std::size_t i = 0;
  uint64x2_t bad = vdupq_n_u64(0);
  for (; i + 2 <= words; i += 2) bad = vorrq_u64(bad, vbicq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  Word tail = 0;
  for (; i < words; ++i) tail |= a[i] & ~b[i];
  return all_zero(bad) && tail == 0;
}

constexpr KernelSet kNeon{"neon", applicable_neon, apply_neon, applicable_batch_neon,
                          subset_neon};

}  // namespace

const KernelSet& neon_kernels_impl() { return kNeon; }

}  // namespace mgpkit::simd
