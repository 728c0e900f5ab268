#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mulrf/tree.hpp"

namespace mulrf {

struct SimParams {
  int n_taxa = 16;
  double tree_height = 50.0;       // time units, root to every tip
  double dl_rate = 0.0;            // duplications and losses each, per lineage per time unit
  int lgt_count = 0;               // transfers per gene tree drawn uniform in {0..lgt_count}
  double deletion_fraction = 0.0;  // per-gene fraction drawn uniform in [0, this], max 0.25
  int n_genes = 1;
  uint64_t seed = 0;
};

// Ultrametric rooted species tree: time[v] is the distance from the root,
// every leaf sits at the full height.
struct TimedTree {
  RootedTree tree;
  std::vector<double> time;
};

struct SimEvent {
  int gene = -1;
  std::string kind;  // dup | loss | lgt | lgt_skipped | delete
  std::string detail;
};

struct GeneTreeRecord {
  RootedTree rooted;   // gene tree before unrooting (post-transfer)
  MulTree gene_tree;   // the same tree unrooted, labels = species ids
  int duplications = 0;  // forks with both sides surviving to the tips
  int losses = 0;        // drawn loss events
  int transfers = 0;     // applied transfers
  int deletions = 0;     // species removed by taxon deletion
  std::vector<SimEvent> events;
};

// Pure-birth species tree: a uniformly chosen extant lineage splits at each
// exponentially distributed step; times rescaled so tips sit at `height`.
// Leaves are labeled 0..n-1.
TimedTree yule_tree(int n, double height, std::mt19937_64& rng);

// Evolves one gene down the species tree: along each branch, duplication and
// loss strike as independent Poisson processes at `rate` each; duplications
// fork the lineage in place, losses kill it, speciations copy it into both
// child branches.  Histories with fewer than 4 surviving leaves are redrawn.
// Every drawn event is logged; `duplications` counts only surviving forks.
GeneTreeRecord evolve_duplication_loss(const TimedTree& species, double rate,
                                       std::mt19937_64& rng);

// Applies `count` random subtree transfers to rec.rooted: subtree c is
// pruned and reattached on an edge (a,b) whose endpoints are not both on the
// root-to-c path.  Events with no legal pair are skipped and logged.  Event
// details name c, a, b by their vertex ids in the tree the move was drawn
// on.  Refreshes rec.gene_tree.
void apply_lgt(GeneTreeRecord& rec, int count, std::mt19937_64& rng);

// Removes all copies of a uniform floor(fraction * #species) subset of the
// species present in the tree.
MulTree delete_taxa(const MulTree& gene, double fraction, std::mt19937_64& rng);

// Gene-tree error knob: applies `moves` random nearest-neighbor interchanges
// (swap two subtrees across a random internal edge).  Trees without an
// internal edge are returned unchanged.
MulTree perturb_nni(const MulTree& t, int moves, std::mt19937_64& rng);

// Average topological error in percent: 100 * RF / (internal edges of truth
// + internal edges of estimate); 0 when neither tree has internal edges.
double ate(const UnrootedTree& truth, const UnrootedTree& estimate, int universe);

// Independent recount of surviving duplications by LCA reconciliation of the
// gene tree into the species tree (a vertex is a duplication iff it maps to
// the same species vertex as one of its children).
int reconciliation_duplications(const RootedTree& gene, const RootedTree& species, int universe);

// The full protocol: one species tree, n_genes gene trees derived from
// per-gene seeds, duplication-loss + transfers + taxon deletion as
// configured.  Deterministic for a fixed seed.
struct SimOutput {
  TimedTree species;
  std::vector<GeneTreeRecord> genes;
};
SimOutput simulate_profile(const SimParams& prm);

}  // namespace mulrf
