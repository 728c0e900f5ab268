#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mulrf/rf.hpp"
#include "mulrf/tree.hpp"

namespace mulrf {

// Brute-force reference paths used to verify the engine.  Everything here is
// exponential or quadratic-with-large-constants and guarded by input-size
// checks; nothing is meant for production workloads.

struct OracleReport {
  std::string instance;
  int64_t oracle_value = 0;
  int64_t engine_value = 0;
  bool agree = false;
  int64_t cases = 0;     // individual comparisons performed
  std::string detail;    // first mismatch, when any
};

// All RF values over every consistent assignment of copy indices between t
// and s (s restricted to t's labels; singleton s-leaves of duplicated labels
// are expanded into copy stars first).  Guards: per-label multiplicity <= 3,
// at most 10 duplicated copies in total.
struct DiffExhaustive {
  int64_t min = 0;
  std::vector<int64_t> values;  // sorted, distinct
};
DiffExhaustive rf_differentiation_exhaustive(const MulTree& t, const UnrootedTree& s,
                                             int universe);

// Every unrooted binary topology on the given taxa (3 <= n <= 8), generated
// by sequential leaf insertion; (2n-5)!! trees.
std::vector<UnrootedTree> enumerate_binary_supertrees(const std::vector<int>& taxa);

// Global optimum of the profile score over all binary supertrees on the
// profile's taxa (at most 7), with every optimal tree.
struct ExhaustiveOptimum {
  int64_t score = 0;
  std::vector<UnrootedTree> optima;
};
ExhaustiveOptimum exhaustive_optimum(const Profile& p);

// Recomputes the profile score from scratch for every SPR neighbor of s and
// compares move-by-move against the incremental scan (n <= 12).
OracleReport neighborhood_naive_check(const Profile& p, const UnrootedTree& s);

// Labeled-tree isomorphism (labels must match literally) by canonical form:
// AHU encoding rooted at the centroid.
bool multree_isomorphic(const MulTree& t1, const MulTree& t2);

// Pair of same-shape balanced trees on k+2 leaves (plus one shared anchor
// leaf) whose split sets are disjoint, so their distance is exactly 2k.
// Requires k >= 6 with k+2 a power of two.  Labels are 0..k+2; the anchor
// leaf is k+2.
std::pair<UnrootedTree, UnrootedTree> fig5_fixture(int k);

}  // namespace mulrf
