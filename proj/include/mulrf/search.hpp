#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mulrf/rf.hpp"
#include "mulrf/tree.hpp"

namespace mulrf {

enum class InitStrategy { kRandom, kGreedyLeafAdd };

struct SearchConfig {
  int restarts = 10;
  int max_iterations = 1000;  // accepted moves per restart
  uint64_t seed = 0;
  InitStrategy init = InitStrategy::kGreedyLeafAdd;
  int workers = 1;
};

struct RestartTrace {
  // Accepted profile score per iteration, starting with the initial tree;
  // strictly decreasing.
  std::vector<int64_t> scores;
  double millis = 0.0;
};

struct SearchResult {
  UnrootedTree best_tree;
  int64_t best_score = 0;
  int best_restart = 0;
  std::vector<RestartTrace> trajectories;
  double total_millis = 0.0;
};

// Deterministic stream splitter for derived seeds (restarts, gene trees).
uint64_t mix_seed(uint64_t seed, uint64_t stream);

// Builds a binary starting supertree on the union of the profile's taxa.
// kRandom inserts a shuffled taxon order at uniformly random edges;
// kGreedyLeafAdd inserts taxa by decreasing profile frequency, each at the
// edge minimizing the profile score of the partial tree (evaluated by the
// incremental scan).
UnrootedTree initial_supertree(const Profile& p, InitStrategy strategy, std::mt19937_64& rng);

// Hill-climbing with restarts: per restart, build an initial tree and apply
// the best SPR move while it strictly improves the profile score (greedy
// initial tree on the first restart when configured, random on the rest).
// Deterministic for a fixed seed regardless of worker count.
SearchResult local_search(const Profile& p, const SearchConfig& cfg);

}  // namespace mulrf
