#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "mgpkit/simd/kernels.hpp"

using namespace mgpkit::simd;

namespace {

std::vector<Word> random_words(std::mt19937_64& rng, std::size_t n, int density) {
  std::vector<Word> w(n);
  for (auto& x : w) {
    x = rng();
    // sparser masks make applicability actually vary
    for (int k = 0; k < density; ++k) x &= rng();
  }
  return w;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  const auto all = available_kernels();
  REQUIRE_FALSE(all.empty());
  CHECK(all.front()->name == scalar_kernels().name);
  bool active_listed = false;
  for (const auto* k : all) active_listed |= k->name == active_kernels().name;
  CHECK(active_listed);
}

TEST_CASE("every variant matches the scalar reference") {
  const KernelSet& ref = scalar_kernels();
  std::mt19937_64 rng(7);
  for (const KernelSet* k : available_kernels()) {
    CAPTURE(k->name);
    for (std::size_t words : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 17u}) {
      for (int trial = 0; trial < 200; ++trial) {
        const auto state = random_words(rng, words, 0);
        const auto pos = random_words(rng, words, 3);
        const auto neg = random_words(rng, words, 3);
        CHECK(k->applicable(state.data(), pos.data(), neg.data(), words) ==
              ref.applicable(state.data(), pos.data(), neg.data(), words));
        CHECK(k->subset(pos.data(), state.data(), words) == ref.subset(pos.data(), state.data(), words));

        std::vector<Word> a(words), b(words);
        k->apply(state.data(), neg.data(), pos.data(), a.data(), words);
        ref.apply(state.data(), neg.data(), pos.data(), b.data(), words);
        CHECK(a == b);

        auto alias = state;
        k->apply(alias.data(), neg.data(), pos.data(), alias.data(), words);
        CHECK(alias == b);
      }

      const std::size_t rows = 37;
      const auto tp = random_words(rng, rows * words, 4);
      const auto tn = random_words(rng, rows * words, 4);
      const auto ta = random_words(rng, rows * words, 2);
      const auto td = random_words(rng, rows * words, 2);
      const ActionTableView table{tp.data(), tn.data(), ta.data(), td.data(), words, rows};
      for (int trial = 0; trial < 50; ++trial) {
        const auto state = random_words(rng, words, 0);
        std::vector<std::uint32_t> x(rows), y(rows);
        const std::size_t nx = k->applicable_batch(state.data(), table, x.data());
        const std::size_t ny = ref.applicable_batch(state.data(), table, y.data());
        REQUIRE(nx == ny);
        x.resize(nx);
        y.resize(ny);
        CHECK(x == y);
      }
    }
  }
}

TEST_CASE("applicable handles the edge masks") {
  for (const KernelSet* k : available_kernels()) {
    const Word zero[2] = {0, 0};
    const Word ones[2] = {~Word{0}, ~Word{0}};
    CHECK(k->applicable(zero, zero, zero, 2));
    CHECK(k->applicable(ones, ones, zero, 2));
    CHECK_FALSE(k->applicable(ones, zero, ones, 2));
    CHECK_FALSE(k->applicable(zero, ones, zero, 2));
  }
}

TEST_CASE("hash is deterministic and sensitive to every word") {
  const Word a[3] = {1, 2, 3};
  const Word b[3] = {1, 2, 4};
  CHECK(hash_words(a, 3) == hash_words(a, 3));
  CHECK(hash_words(a, 3) != hash_words(b, 3));
}
