#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mgpkit/simd/kernels.hpp"

namespace mgpkit {

using AtomId = std::uint32_t;

/// Fixed-universe bitset over the ground atoms of one world.
class AtomSet {
 public:
  using Word = simd::Word;

  AtomSet() = default;
  explicit AtomSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static AtomSet from_ids(std::size_t universe, std::span<const AtomId> ids);

  std::size_t universe() const { return universe_; }
  std::size_t word_count() const { return words_.size(); }
  const Word* data() const { return words_.data(); }
  Word* data() { return words_.data(); }

  bool test(AtomId id) const { return (words_[id >> 6] >> (id & 63)) & 1U; }
  void set(AtomId id) { words_[id >> 6] |= Word{1} << (id & 63); }
  void reset(AtomId id) { words_[id >> 6] &= ~(Word{1} << (id & 63)); }

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  /// Ascending atom ids.
  std::vector<AtomId> ids() const;

  bool is_subset_of(const AtomSet& other) const;
  bool intersects(const AtomSet& other) const;

  std::uint64_t hash() const { return simd::hash_words(words_.data(), words_.size()); }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

  /// Canonical order: lexicographic over ascending id lists.
  friend bool operator<(const AtomSet& a, const AtomSet& b) { return a.ids() < b.ids(); }

 private:
  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const { return static_cast<std::size_t>(s.hash()); }
};

}  // namespace mgpkit
