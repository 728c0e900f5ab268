#include "mulrf/bitset.hpp"

#include <bit>

namespace mulrf {

int Bitset::count() const {
  int c = 0;
  for (uint64_t w : words_) c += std::popcount(w);
  return c;
}

bool Bitset::any() const {
  for (uint64_t w : words_)
    if (w) return true;
  return false;
}

int Bitset::lowest_set() const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
  return -1;
}

Bitset Bitset::operator&(const Bitset& o) const {
  Bitset r(nbits_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
  return r;
}

Bitset Bitset::operator|(const Bitset& o) const {
  Bitset r(nbits_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
  return r;
}

Bitset Bitset::complement() const {
  Bitset r(nbits_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
  int tail = nbits_ & 63;
  if (tail && !r.words_.empty()) r.words_.back() &= (uint64_t{1} << tail) - 1;
  return r;
}

bool Bitset::is_subset_of(const Bitset& o) const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool Bitset::intersects(const Bitset& o) const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

bool Bitset::operator<(const Bitset& o) const {
  if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
  return words_ < o.words_;
}

size_t Bitset::hash() const {
  // FNV-1a over the words; good enough for split-set hashing.
  uint64_t h = 1469598103934665603ull;
  for (uint64_t w : words_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h ^ static_cast<uint64_t>(nbits_));
}

}  // namespace mulrf
