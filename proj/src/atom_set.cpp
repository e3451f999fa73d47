#include "mgpkit/atom_set.hpp"

#include <bit>

#include "mgpkit/error.hpp"

namespace mgpkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return "schema-error";
    case ErrorKind::Precondition: return "precondition-violation";
    case ErrorKind::Modification: return "modification-error";
    case ErrorKind::World: return "world-error";
    case ErrorKind::Argument: return "argument-error";
    case ErrorKind::Execution: return "execution-error";
    case ErrorKind::Relaxation: return "relaxation-error";
    case ErrorKind::Budget: return "budget-error";
    case ErrorKind::NotMgp: return "not-an-mgp";
    case ErrorKind::MetricUndefined: return "metric-undefined";
    case ErrorKind::UndefinedConditional: return "undefined-conditional";
    case ErrorKind::Input: return "input-error";
    case ErrorKind::Io: return "io-error";
  }
  return "error";
}

AtomSet AtomSet::from_ids(std::size_t universe, std::span<const AtomId> ids) {
  AtomSet s(universe);
  for (AtomId id : ids) s.set(id);
  return s;
}

std::size_t AtomSet::count() const {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<AtomId> AtomSet::ids() const {
  std::vector<AtomId> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    Word bits = words_[w];
    while (bits != 0) {
      const int bit = std::countr_zero(bits);
      out.push_back(static_cast<AtomId>(w * 64 + static_cast<std::size_t>(bit)));
      bits &= bits - 1;
    }
  }
  return out;
}

bool AtomSet::is_subset_of(const AtomSet& other) const {
  return simd::active_kernels().subset(words_.data(), other.words_.data(), words_.size());
}

bool AtomSet::intersects(const AtomSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

}  // namespace mgpkit
