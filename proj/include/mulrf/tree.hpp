#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mulrf/bitset.hpp"

namespace mulrf {

struct TreeError : std::runtime_error {
  explicit TreeError(const std::string& what) : std::runtime_error(what) {}
};

struct Edge {
  int u = -1, v = -1;  // u < v
  bool operator==(const Edge&) const = default;
  bool operator<(const Edge& o) const { return u != o.u ? u < o.u : v < o.v; }
};

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Unrooted tree with taxon-labelled leaves.  Vertex ids are dense; leaves
// occupy the low id range (enforced by compact()).  Duplicate leaf labels are
// allowed: a tree whose labelling is not injective is a mul-tree.  Treat
// instances as immutable values; operations below return new trees.
struct UnrootedTree {
  std::vector<std::vector<int>> adj;
  std::vector<int> leaf_label;  // taxon id, or -1 for internal vertices

  int vertex_count() const { return static_cast<int>(adj.size()); }
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool is_leaf(int v) const { return leaf_label[v] >= 0; }

  int leaf_count() const;
  std::vector<int> leaves() const;  // vertex ids, ascending
  int edge_count() const;
  // All edges as (u,v) pairs with u < v, sorted; the index in this list is
  // the edge id used by SPR moves.
  std::vector<Edge> edge_list() const;
  int internal_edge_count() const;

  bool is_binary() const;  // every internal vertex has degree exactly 3
  bool is_singly_labeled() const;

  Bitset label_set(int universe) const;
  std::vector<int> label_multiplicity(int universe) const;
  // Some vertex id of a leaf carrying `taxon`; -1 if absent.
  int find_leaf(int taxon) const;

  // Throws TreeError unless connected, acyclic, leaf-degree-1, and every
  // internal vertex has degree >= 3 (degree 2 allowed only for the
  // single-vertex and two-vertex degenerate trees, where it cannot occur).
  void validate() const;
};

// A mul-tree is an unrooted tree allowed to repeat leaf labels.
using MulTree = UnrootedTree;

// Rooted tree produced by root_at_taxon: the pendant edge of the root taxon's
// leaf is subdivided and the new degree-2 vertex becomes the root, so the
// root has exactly two children and the root leaf stays a leaf.
struct RootedTree {
  int root = -1;
  std::vector<int> parent;                 // -1 at the root
  std::vector<std::vector<int>> children;  // empty at leaves
  std::vector<int> leaf_label;             // taxon id, or -1

  int vertex_count() const { return static_cast<int>(parent.size()); }
  bool is_leaf(int v) const { return leaf_label[v] >= 0; }
  // Vertices in postorder (children before parents).
  std::vector<int> postorder() const;
  // Internal vertices excluding the root; the domain of cluster counting.
  std::vector<int> internal_nonroot() const;
  int find_leaf(int taxon) const;
};

// --- constructors ---------------------------------------------------------

UnrootedTree single_leaf_tree(int taxon);
UnrootedTree two_leaf_tree(int a, int b);
// Star: one internal hub adjacent to every listed leaf (size >= 3).
UnrootedTree star_tree(const std::vector<int>& taxa);

// --- operations -----------------------------------------------------------

// Renumber vertices densely with leaves first (ordered by label, then by old
// id) and internal vertices after (by old id).  All constructors and
// tree-producing operations return compacted trees.
UnrootedTree compact(const UnrootedTree& t);

// Subtree induced by the given leaf vertices, with all resulting degree-2
// vertices suppressed.  |keep| >= 1; keep must name leaves.
UnrootedTree restrict_leaves(const UnrootedTree& t, const std::vector<int>& keep);
// Convenience: keep every leaf whose label is in `labels`.
UnrootedTree restrict_to_labels(const UnrootedTree& t, const Bitset& labels);

// Canonical splits of a singly-labeled tree: one bitset per internal edge,
// holding the side that avoids the tree's lowest-indexed label; sorted.
// universe = width of the bitsets (taxon table size).
std::vector<Bitset> tree_splits(const UnrootedTree& t, int universe);

// Clusters of a rooted tree: for every internal non-root vertex, the set of
// labels below it.  Requires singly-labeled.
std::vector<Bitset> tree_clusters(const RootedTree& t, int universe);

RootedTree root_at_taxon(const UnrootedTree& t, int taxon);
// Inverse of root_at_taxon: removes the root and restores the pendant edge.
UnrootedTree unroot(const RootedTree& t);

// Subdivides edge e and hangs a new leaf with the given label off the new
// vertex.
UnrootedTree attach_leaf(const UnrootedTree& t, int label, Edge e);

// Contracts an internal edge, merging its endpoints.
UnrootedTree contract_edge(const UnrootedTree& t, Edge e);
// Splits vertex v (degree >= 4) into an edge, moving the neighbors listed in
// `side` (2 <= |side| <= deg(v) - 2) onto the new vertex.
UnrootedTree refine_vertex(const UnrootedTree& t, int v, const std::vector<int>& side);

// Topology equality for singly-labeled trees on the same label set, decided
// by canonical split-set (plus label-set) equality.
bool same_topology(const UnrootedTree& a, const UnrootedTree& b, int universe);

// Splices out every unlabelled degree-2 vertex and removes unlabelled
// pendant chains; used by the parser and by tree surgery.
UnrootedTree suppress_degree_two(const UnrootedTree& t);

}  // namespace mulrf
