// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "mgpkit/simd/kernels.hpp"

namespace mgpkit::simd {
namespace {

inline __m256i load(const Word* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

bool applicable_avx2(const Word* state, const Word* pos, const Word* neg,
                     std::size_t words) {
  std::size_t i = 0;
  __m256i bad = _mm256_setzero_si256();
  for (; i + 4 <= words; i += 4) {
    const __m256i s = load(state + i);
    const __m256i p = load(pos + i);
    const __m256i n = load(neg + i);
    // andnot(s, p) = ~s & p : required bits missing from the state
    bad = _mm256_or_si256(bad, _mm256_andnot_si256(s, p));
    bad = _mm256_or_si256(bad, _mm256_and_si256(s, n));
  }
  Word tail = 0;
  for (; i < words; ++i) {
    tail |= ~state[i] & pos[i];
    tail |= state[i] & neg[i];
  }
  return _mm256_testz_si256(bad, bad) && tail == 0;
}

void apply_avx2(const Word* state, const Word* del, const Word* add, Word* out,
                std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i r =
        _mm256_or_si256(_mm256_andnot_si256(load(del + i), load(state + i)), load(add + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), r);
  }
  for (; i < words; ++i) out[i] = (state[i] & ~del[i]) | add[i];
}

// Small states (one word) dominate in practice, so the single-word case
// tests four actions per iteration instead of four words of one action.
std::size_t applicable_batch_avx2(const Word* state, const ActionTableView& t,
                                  std::uint32_t* out) {
  std::size_t n = 0;
  if (t.words == 1) {
    const __m256i s = _mm256_set1_epi64x(static_cast<long long>(state[0]));
    const __m256i zero = _mm256_setzero_si256();
    std::size_t a = 0;
    for (; a + 4 <= t.count; a += 4) {
      const __m256i bad = _mm256_or_si256(_mm256_andnot_si256(s, load(t.pre_pos + a)),
                                          _mm256_and_si256(s, load(t.pre_neg + a)));
      const int ok = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(bad, zero)));
      for (int lane = 0; lane < 4; ++lane)
        if (ok & (1 << lane)) out[n++] = static_cast<std::uint32_t>(a + lane);
    }
    for (; a < t.count; ++a) {
      if (((~state[0] & t.pre_pos[a]) | (state[0] & t.pre_neg[a])) == 0)
        out[n++] = static_cast<std::uint32_t>(a);
    }
    return n;
  }
  for (std::size_t a = 0; a < t.count; ++a) {
    const std::size_t off = a * t.words;
    if (applicable_avx2(state, t.pre_pos + off, t.pre_neg + off, t.words))
      out[n++] = static_cast<std::uint32_t>(a);
  }
  return n;
}

bool subset_avx2(const Word* a, const Word* b, std::size_t words) {
  std::size_t i = 0;
  __m256i bad = _mm256_setzero_si256();
  for (; i + 4 <= words; i += 4) bad = _mm256_or_si256(bad, _mm256_andnot_si256(load(b + i), load(a + i)));
  Word tail = 0;
  for (; i < words; ++i) tail |= a[i] & ~b[i];
  return _mm256_testz_si256(bad, bad) && tail == 0;
}

constexpr KernelSet kAvx2{"avx2", applicable_avx2, apply_avx2, applicable_batch_avx2,
                          subset_avx2};

}  // namespace

const KernelSet& avx2_kernels_impl() { return kAvx2; }

}  // namespace mgpkit::simd
