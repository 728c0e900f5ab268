#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mulrf {

// Fixed-width bitset sized at construction.  Used for leaf sets, splits and
// clusters over a taxon (or copy-label) universe.  All binary operations
// require operands of equal width.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  int size() const { return nbits_; }

  void set(int i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  int count() const;
  bool any() const;
  bool none() const { return !any(); }
  // Index of the lowest set bit, or -1 when empty.
  int lowest_set() const;

  Bitset operator&(const Bitset& o) const;
  Bitset operator|(const Bitset& o) const;
  // Complement within the universe; trailing bits of the last word stay 0.
  Bitset complement() const;

  bool is_subset_of(const Bitset& o) const;
  bool intersects(const Bitset& o) const;

  bool operator==(const Bitset& o) const = default;
  bool operator<(const Bitset& o) const;  // lexicographic on words, for sorting

  size_t hash() const;

 private:
  int nbits_ = 0;
  std::vector<uint64_t> words_;
};

struct BitsetHash {
  size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace mulrf
