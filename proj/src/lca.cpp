#include "mulrf/lca.hpp"

namespace mulrf {

LcaIndex::LcaIndex(const RootedTree& t) {
  int n = t.vertex_count();
  depth_.assign(n, 0);
  first_.assign(n, -1);
  euler_.reserve(2 * n);
  // Iterative Euler tour.
  std::vector<std::pair<int, int>> stack{{t.root, 0}};
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    if (ci == 0) {
      first_[v] = static_cast<int>(euler_.size());
      euler_.push_back(v);
    }
    if (ci < static_cast<int>(t.children[v].size())) {
      int c = t.children[v][ci++];
      depth_[c] = depth_[v] + 1;
      stack.push_back({c, 0});
    } else {
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }
  int m = static_cast<int>(euler_.size());
  log2_.assign(m + 1, 0);
  for (int i = 2; i <= m; ++i) log2_[i] = log2_[i / 2] + 1;
  int levels = log2_[m] + 1;
  table_.assign(levels, std::vector<int>(m));
  for (int i = 0; i < m; ++i) table_[0][i] = i;
  for (int k = 1; k < levels; ++k) {
    int span = 1 << k;
    for (int i = 0; i + span <= m; ++i)
      table_[k][i] = min_pos(table_[k - 1][i], table_[k - 1][i + span / 2]);
  }
}

int LcaIndex::lca(int u, int v) const {
  int a = first_[u], b = first_[v];
  if (a > b) std::swap(a, b);
  int k = log2_[b - a + 1];
  return euler_[min_pos(table_[k][a], table_[k][b - (1 << k) + 1])];
}

}  // namespace mulrf
