#pragma once

#include <vector>

#include "mulrf/tree.hpp"

namespace mulrf {

// Constant-time LCA queries after O(n log n) preprocessing: Euler tour plus
// sparse-table range-minimum over tour depths.
class LcaIndex {
 public:
  explicit LcaIndex(const RootedTree& t);

  int lca(int u, int v) const;
  int depth(int v) const { return depth_[v]; }
  // Fold over a range of vertices; -1 entries are skipped, all -1 gives -1.
  template <class It>
  int lca_fold(It first, It last) const {
    int acc = -1;
    for (; first != last; ++first) {
      int v = *first;
      if (v < 0) continue;
      acc = acc < 0 ? v : lca(acc, v);
    }
    return acc;
  }

 private:
  std::vector<int> euler_;   // vertex at each tour step
  std::vector<int> first_;   // first tour position of each vertex
  std::vector<int> depth_;   // per vertex
  std::vector<std::vector<int>> table_;  // sparse table of tour positions
  std::vector<int> log2_;

  int min_pos(int a, int b) const {
    return depth_[euler_[a]] <= depth_[euler_[b]] ? a : b;
  }
};

}  // namespace mulrf
