#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mulrf/rf.hpp"
#include "mulrf/tree.hpp"

namespace mulrf {

// One SPR move on a binary supertree: cut an edge, prune the component
// holding one endpoint, regraft it on an edge of the other component.
// Regrafting on either edge incident to the suppressed cut endpoint would
// recreate the original tree, so such targets are never produced.
struct SprMove {
  Edge cut;
  int pruned_side = 0;  // 0: the component containing cut.u is pruned; 1: cut.v
  Edge regraft;         // edge of the host component, by original vertex ids
  bool operator==(const SprMove&) const = default;
};

UnrootedTree apply_spr(const UnrootedTree& s, const SprMove& m);

// Every SPR move of s paired with the resulting tree.  Distinct moves may
// yield equal topologies; no deduplication here (tests dedup by split sets).
std::vector<std::pair<SprMove, UnrootedTree>> spr_neighborhood(const UnrootedTree& s);

// Depth-first edge ordering of a tree fragment from a starting leaf: the
// closed walk visiting every edge twice, as consecutive vertex pairs.  Every
// two consecutive distinct edges share a vertex.
std::vector<Edge> aleph_order(const UnrootedTree& fragment, int start_leaf);

// Incremental scan of one cut edge of s against one gene tree: RF(t, .) for
// regrafting the pruned component on every admissible edge of the host
// component, each value obtained from the previous position in O(1) mapping
// updates.  If the gene tree's taxa all avoid one side of the cut, every
// value equals rf_multree_supertree(t, s).  `self_check` revalidates the
// incremental state from scratch after every step (tests only).
struct ScanEntry {
  SprMove move;
  int64_t rf = 0;
};
std::vector<ScanEntry> scan_cut_edge(const UnrootedTree& s, const MulTree& t,
                                     const TaxonTable& taxa, Edge cut, int pruned_side,
                                     bool self_check = false);

// Full steepest-descent neighborhood evaluation: total profile RF for every
// SPR move of s, returning the best move (ties broken by first occurrence in
// cut-edge id, then canonical regraft order).  `all_moves`, when given,
// receives every (move, total) pair.  Θ(n²k) via the incremental scans.
struct SprSearchResult {
  bool has_move = false;
  SprMove best_move;
  int64_t best_score = 0;    // profile score of the best neighbor
  int64_t current_score = 0; // profile score of s itself
};
SprSearchResult spr_search(const Profile& p, const UnrootedTree& s, int workers = 1,
                           std::vector<ScanEntry>* all_moves = nullptr);

}  // namespace mulrf
