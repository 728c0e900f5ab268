#pragma once

#include <cstdint>
#include <vector>

#include "mulrf/lca.hpp"
#include "mulrf/taxa.hpp"
#include "mulrf/tree.hpp"

namespace mulrf {

// A profile of (mul-)gene trees over a shared taxon table.
struct Profile {
  TaxonTable taxa;
  std::vector<MulTree> trees;
};

// --- extension and differentiation ---------------------------------------

// Replaces each leaf of s whose taxon has multiplicity k >= 2 in t by an
// internal hub carrying k leaves of that taxon.  Taxa of t must all occur in
// s.  The result is a mul-tree over the same taxon table.
MulTree extend_supertree(const UnrootedTree& s, const MulTree& t, int universe);

// Consistent full differentiation of a mul-tree pair: every taxon with
// multiplicity k >= 2 gets copy labels over a fresh universe, numbered in
// depth-first order from the lowest vertex id in each tree.  Shared taxa must
// have equal multiplicities in t and s.
struct Differentiation {
  UnrootedTree t, s;     // singly labeled over the copy universe
  TaxonTable copy_taxa;
  std::vector<int> first_copy;  // taxon id -> first copy id (-1 if unused)
  std::vector<int> copy_count;  // taxon id -> copies allocated
};
Differentiation differentiate(const MulTree& t, const MulTree& s, const TaxonTable& taxa);

// --- distances ------------------------------------------------------------

// Split-symmetric-difference distance between singly-labeled trees with
// L(t1) subset-of L(t2); t2 is restricted to L(t1) first.
int64_t rf_unrooted(const UnrootedTree& t1, const UnrootedTree& t2, int universe);

// Reference (gene) side of the rooted kernel, reusable across many
// subject-side evaluations against the same rooting.
struct RefSide {
  RootedTree tree;
  LcaIndex index;
  std::vector<int> cluster_size;   // leaves below each vertex
  std::vector<int> leaf_of_label;  // label -> leaf vertex, -1 if absent
  int internal_count;              // |I|, internal vertices excluding the root
  explicit RefSide(RootedTree t, int universe);
};

// Subject-side per-vertex data produced by the LCA mapping.
struct MappingData {
  std::vector<int> map;            // S vertex -> reference vertex, -1 if empty
  std::vector<int> restricted_size;
  std::vector<int> kept_children;  // children with nonempty restricted cluster
};
MappingData lca_mapping(const RootedTree& s, const RefSide& ref);

struct RootedRf {
  int64_t rf = 0;
  int fzero = 0;         // reference clusters matched by no subject cluster
  int branch_count = 0;  // distinct nonempty restricted subject clusters
};
// Rooted distance: both trees rooted at the same taxon via root_at_taxon,
// labels of the reference a subset of the subject's.  Counts reference
// clusters left unmatched (via the vertex function f computed from the LCA
// mapping) and evaluates
//   rf = branch_count - |I(ref)| + 2 * fzero,
// which reduces to |L| - |I(ref)| - 2 + 2 * fzero when the subject's
// restriction is binary.
RootedRf rf_rooted_full(const RefSide& ref, const RootedTree& s);
int64_t rf_rooted(const RootedTree& reference, const RootedTree& subject, int universe);

// Distance from a mul-tree t to a singly-labeled supertree s with
// M(t) subset-of L(s): restrict s to M(t), extend for t, differentiate once,
// root both at the first copy of the lexicographically smallest shared
// label, and run the rooted kernel.
int64_t rf_multree_supertree(const MulTree& t, const UnrootedTree& s, const TaxonTable& taxa);

struct ProfileRf {
  int64_t total = 0;
  std::vector<int64_t> per_tree;
};
ProfileRf rf_profile(const Profile& p, const UnrootedTree& s);

}  // namespace mulrf
