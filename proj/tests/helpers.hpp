#pragma once

#include <random>
#include <vector>

#include "mulrf/tree.hpp"

namespace testutil {

// Random binary tree on the given (distinct) labels by sequential insertion
// at uniformly chosen edges.
inline mulrf::UnrootedTree random_binary(const std::vector<int>& labels, std::mt19937_64& rng) {
  using namespace mulrf;
  if (labels.empty()) throw TreeError("random_binary: no labels");
  if (labels.size() == 1) return single_leaf_tree(labels[0]);
  if (labels.size() == 2) return two_leaf_tree(labels[0], labels[1]);
  UnrootedTree t = star_tree({labels[0], labels[1], labels[2]});
  for (size_t i = 3; i < labels.size(); ++i) {
    std::vector<Edge> edges = t.edge_list();
    std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
    t = attach_leaf(t, labels[i], edges[pick(rng)]);
  }
  return t;
}

inline mulrf::UnrootedTree random_binary_n(int n, std::mt19937_64& rng) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  return random_binary(labels, rng);
}

// Random binary mul-tree: `leaves` leaves drawn from `labels` with per-label
// multiplicity at most max_mult (at least one leaf guaranteed per sampled
// label; the label set is whatever the sampling hits).
inline mulrf::MulTree random_multree(const std::vector<int>& labels, int leaves, int max_mult,
                                     std::mt19937_64& rng) {
  using namespace mulrf;
  std::vector<int> seq;
  std::vector<int> used(labels.size(), 0);
  std::uniform_int_distribution<size_t> pick(0, labels.size() - 1);
  int guard = 0;
  while (static_cast<int>(seq.size()) < leaves && guard++ < leaves * 100) {
    size_t i = pick(rng);
    if (used[i] >= max_mult) continue;
    ++used[i];
    seq.push_back(labels[i]);
  }
  if (seq.empty()) seq.push_back(labels[0]);
  if (seq.size() == 1) return single_leaf_tree(seq[0]);
  if (seq.size() == 2) return two_leaf_tree(seq[0], seq[1]);
  MulTree t = star_tree({seq[0], seq[1], seq[2]});
  for (size_t i = 3; i < seq.size(); ++i) {
    std::vector<Edge> edges = t.edge_list();
    std::uniform_int_distribution<size_t> pe(0, edges.size() - 1);
    t = attach_leaf(t, seq[i], edges[pe(rng)]);
  }
  return t;
}

}  // namespace testutil
