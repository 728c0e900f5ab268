#include "mulrf/sim.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "mulrf/lca.hpp"
#include "mulrf/rf.hpp"
#include "mulrf/search.hpp"

namespace mulrf {

TimedTree yule_tree(int n, double height, std::mt19937_64& rng) {
  if (n < 2) throw TreeError("yule: need at least 2 species");
  if (!(height > 0)) throw TreeError("yule: height must be positive");
  TimedTree out;
  RootedTree& t = out.tree;
  std::vector<double> raw;  // unscaled split time per vertex; leaves overwritten
  auto add_vertex = [&](int parent) {
    t.parent.push_back(parent);
    t.children.emplace_back();
    t.leaf_label.push_back(-1);
    raw.push_back(0.0);
    if (parent >= 0) t.children[parent].push_back(t.vertex_count() - 1);
    return t.vertex_count() - 1;
  };
  std::exponential_distribution<double> unit(1.0);
  t.root = add_vertex(-1);
  std::vector<int> extant{add_vertex(t.root), add_vertex(t.root)};
  double now = 0.0;
  while (static_cast<int>(extant.size()) < n) {
    now += unit(rng) / extant.size();
    std::uniform_int_distribution<size_t> pick(0, extant.size() - 1);
    size_t i = pick(rng);
    int v = extant[i];
    raw[v] = now;
    extant[i] = add_vertex(v);
    extant.push_back(add_vertex(v));
  }
  double total = now + unit(rng) / n;
  double scale = height / total;
  for (double& x : raw) x *= scale;
  int next_label = 0;
  for (int v : extant) {
    t.leaf_label[v] = next_label++;
    raw[v] = height;
  }
  out.time = std::move(raw);
  return out;
}

namespace {

struct GeneBuilder {
  std::vector<int> parent, label;
  std::vector<std::vector<int>> kids;
  int add(int a, int b, int lbl) {  // internal if a,b >= 0, else leaf
    int v = static_cast<int>(parent.size());
    parent.push_back(-1);
    kids.emplace_back();
    label.push_back(lbl);
    if (a >= 0) {
      kids[v] = {a, b};
      parent[a] = v;
      parent[b] = v;
    }
    return v;
  }
};

RootedTree finish_gene(const GeneBuilder& gb, int root) {
  RootedTree t;
  t.root = root;
  t.parent = gb.parent;
  t.children = gb.kids;
  t.leaf_label = gb.label;
  t.parent[root] = -1;
  return t;
}

}  // namespace

GeneTreeRecord evolve_duplication_loss(const TimedTree& species, double rate,
                                       std::mt19937_64& rng) {
  if (rate < 0) throw TreeError("duplication-loss: negative rate");
  const RootedTree& sp = species.tree;
  std::exponential_distribution<double> wait(rate > 0 ? rate : 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    GeneTreeRecord rec;
    GeneBuilder gb;
    int leaves = 0;
    bool overflow = false;
    // One gene lineage running down the branch into species vertex sv,
    // currently at time `at`; returns its surviving subtree or -1.
    std::function<int(int, double)> lineage = [&](int sv, double at) -> int {
      if (overflow) return -1;
      if (static_cast<int>(gb.parent.size()) > 200000) {
        overflow = true;
        return -1;
      }
      if (rate > 0) {
        double t_dup = at + wait(rng);
        double t_loss = at + wait(rng);
        double next = std::min(t_dup, t_loss);
        if (next < species.time[sv]) {
          if (t_loss <= t_dup) {
            ++rec.losses;
            rec.events.push_back({-1, "loss", "species_vertex=" + std::to_string(sv)});
            return -1;
          }
          rec.events.push_back({-1, "dup", "species_vertex=" + std::to_string(sv)});
          int a = lineage(sv, t_dup);
          int b = lineage(sv, t_dup);
          if (a < 0) return b;
          if (b < 0) return a;
          ++rec.duplications;
          return gb.add(a, b, -1);
        }
      }
      if (sp.is_leaf(sv)) {
        ++leaves;
        return gb.add(-1, -1, sp.leaf_label[sv]);
      }
      int a = lineage(sp.children[sv][0], species.time[sv]);
      int b = lineage(sp.children[sv][1], species.time[sv]);
      if (a < 0) return b;
      if (b < 0) return a;
      return gb.add(a, b, -1);
    };
    int a = lineage(sp.children[sp.root][0], 0.0);
    int b = lineage(sp.children[sp.root][1], 0.0);
    if (overflow) throw TreeError("duplication-loss: rate too high, gene tree exploded");
    int root = a < 0 ? b : (b < 0 ? a : gb.add(a, b, -1));
    if (root < 0 || leaves < 4) continue;  // extinct or too sparse: redraw
    rec.rooted = finish_gene(gb, root);
    rec.gene_tree = unroot(rec.rooted);
    return rec;
  }
  throw TreeError("duplication-loss: no surviving gene tree in 1000 attempts");
}

namespace {

// Root-to-v inclusive, as flags.
std::vector<char> path_flags(const RootedTree& t, int v) {
  std::vector<char> on(t.vertex_count(), 0);
  for (int u = v; u >= 0; u = t.parent[u]) on[u] = 1;
  return on;
}

std::vector<char> subtree_flags(const RootedTree& t, int v) {
  std::vector<char> in(t.vertex_count(), 0);
  std::vector<int> stack{v};
  in[v] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : t.children[u]) {
      in[w] = 1;
      stack.push_back(w);
    }
  }
  return in;
}

}  // namespace

void apply_lgt(GeneTreeRecord& rec, int count, std::mt19937_64& rng) {
  if (count < 0) throw TreeError("lgt: negative count");
  for (int ev = 0; ev < count; ++ev) {
    const RootedTree& t = rec.rooted;
    int n = t.vertex_count();
    std::vector<std::pair<int, int>> legal;  // (pruned subtree c, regraft child b)
    for (int c = 0; c < n; ++c) {
      if (c == t.root) continue;
      std::vector<char> on_path = path_flags(t, c);
      std::vector<char> below = subtree_flags(t, c);
      for (int b = 0; b < n; ++b) {
        if (b == t.root || below[b]) continue;
        int pa = t.parent[b];
        if (on_path[pa] && on_path[b]) continue;  // both endpoints ancestral to c
        legal.emplace_back(c, b);
      }
    }
    if (legal.empty()) {
      rec.events.push_back({-1, "lgt_skipped", "no legal transfer"});
      continue;
    }
    std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
    auto [c, b] = legal[pick(rng)];
    int a = rec.rooted.parent[b];
    rec.events.push_back({-1, "lgt",
                          "c=" + std::to_string(c) + " a=" + std::to_string(a) +
                              " b=" + std::to_string(b)});
    ++rec.transfers;

    // Surgery on copies of the arrays; dead vertices compacted afterwards.
    RootedTree& rt = rec.rooted;
    int p = rt.parent[c];
    auto& pk = rt.children[p];
    pk.erase(std::find(pk.begin(), pk.end(), c));
    std::vector<char> dead(rt.vertex_count(), 0);
    if (pk.size() == 1) {  // splice the now-unary vertex away
      int q = pk[0];
      int gp = rt.parent[p];
      if (gp < 0) {
        rt.root = q;
        rt.parent[q] = -1;
      } else {
        std::replace(rt.children[gp].begin(), rt.children[gp].end(), p, q);
        rt.parent[q] = gp;
      }
      dead[p] = 1;
    }
    // Insert a new vertex above b (wherever b is now) and hang c off it.
    int x = rt.vertex_count();
    rt.parent.push_back(-1);
    rt.children.push_back({b, c});
    rt.leaf_label.push_back(-1);
    dead.push_back(0);
    int bp = rt.parent[b];
    if (bp < 0) {
      rt.root = x;
    } else {
      std::replace(rt.children[bp].begin(), rt.children[bp].end(), b, x);
      rt.parent[x] = bp;
    }
    rt.parent[b] = x;
    rt.parent[c] = x;
    // Compact out the dead vertex.
    std::vector<int> remap(rt.vertex_count(), -1);
    RootedTree out;
    for (int v = 0; v < rt.vertex_count(); ++v) {
      if (dead[v]) continue;
      remap[v] = out.vertex_count();
      out.parent.push_back(-1);
      out.children.emplace_back();
      out.leaf_label.push_back(rt.leaf_label[v]);
    }
    for (int v = 0; v < rt.vertex_count(); ++v) {
      if (dead[v]) continue;
      out.parent[remap[v]] = rt.parent[v] >= 0 ? remap[rt.parent[v]] : -1;
      for (int w : rt.children[v]) out.children[remap[v]].push_back(remap[w]);
    }
    out.root = remap[rt.root];
    rec.rooted = std::move(out);
  }
  rec.gene_tree = unroot(rec.rooted);
}

MulTree delete_taxa(const MulTree& gene, double fraction, std::mt19937_64& rng) {
  if (fraction < 0 || fraction > 1) throw TreeError("delete_taxa: fraction out of [0,1]");
  int universe = 0;
  for (int l : gene.leaf_label) universe = std::max(universe, l + 1);
  Bitset present = gene.label_set(universe);
  std::vector<int> species;
  for (int a = 0; a < universe; ++a)
    if (present.test(a)) species.push_back(a);
  int drop = static_cast<int>(fraction * species.size());
  if (drop == 0) return gene;
  if (drop >= static_cast<int>(species.size()))
    throw TreeError("delete_taxa: would remove every label");
  std::shuffle(species.begin(), species.end(), rng);
  Bitset keep = present;
  for (int i = 0; i < drop; ++i) keep.reset(species[i]);
  return restrict_to_labels(gene, keep);
}

MulTree perturb_nni(const MulTree& t, int moves, std::mt19937_64& rng) {
  if (moves < 0) throw TreeError("perturb_nni: negative move count");
  MulTree out = t;
  for (int m = 0; m < moves; ++m) {
    std::vector<Edge> internal;
    for (const Edge& e : out.edge_list())
      if (!out.is_leaf(e.u) && !out.is_leaf(e.v)) internal.push_back(e);
    if (internal.empty()) return out;
    std::uniform_int_distribution<size_t> pick_edge(0, internal.size() - 1);
    auto [u, v] = internal[pick_edge(rng)];
    std::vector<int> nu, nv;
    for (int w : out.adj[u])
      if (w != v) nu.push_back(w);
    for (int w : out.adj[v])
      if (w != u) nv.push_back(w);
    std::uniform_int_distribution<size_t> pa(0, nu.size() - 1), pb(0, nv.size() - 1);
    int a = nu[pa(rng)], b = nv[pb(rng)];
    std::replace(out.adj[u].begin(), out.adj[u].end(), a, b);
    std::replace(out.adj[v].begin(), out.adj[v].end(), b, a);
    std::replace(out.adj[a].begin(), out.adj[a].end(), u, v);
    std::replace(out.adj[b].begin(), out.adj[b].end(), v, u);
  }
  return out;
}

double ate(const UnrootedTree& truth, const UnrootedTree& estimate, int universe) {
  if (!truth.is_singly_labeled() || !estimate.is_singly_labeled())
    throw TreeError("ate: trees must be singly labeled");
  if (!(truth.label_set(universe) == estimate.label_set(universe)))
    throw TreeError("ate: leaf sets differ");
  int denom = truth.internal_edge_count() + estimate.internal_edge_count();
  if (denom == 0) return 0.0;
  return 100.0 * static_cast<double>(rf_unrooted(truth, estimate, universe)) / denom;
}

int reconciliation_duplications(const RootedTree& gene, const RootedTree& species,
                                int universe) {
  LcaIndex idx(species);
  std::vector<int> leaf_of(universe, -1);
  for (int v = 0; v < species.vertex_count(); ++v)
    if (species.leaf_label[v] >= 0) leaf_of[species.leaf_label[v]] = v;
  std::vector<int> map(gene.vertex_count(), -1);
  int dups = 0;
  for (int v : gene.postorder()) {
    if (gene.is_leaf(v)) {
      map[v] = leaf_of[gene.leaf_label[v]];
      if (map[v] < 0) throw TreeError("reconciliation: unknown species label");
      continue;
    }
    bool dup = false;
    for (int w : gene.children[v]) {
      map[v] = map[v] < 0 ? map[w] : idx.lca(map[v], map[w]);
    }
    for (int w : gene.children[v]) dup = dup || map[w] == map[v];
    if (dup) ++dups;
  }
  return dups;
}

SimOutput simulate_profile(const SimParams& prm) {
  if (prm.n_taxa < 2 || prm.n_genes < 1 || !(prm.tree_height > 0) || prm.dl_rate < 0 ||
      prm.lgt_count < 0 || prm.deletion_fraction < 0 || prm.deletion_fraction > 0.25)
    throw TreeError("simulate: invalid parameters");
  SimOutput out;
  std::mt19937_64 sp_rng(mix_seed(prm.seed, 0));
  out.species = yule_tree(prm.n_taxa, prm.tree_height, sp_rng);
  out.genes.reserve(prm.n_genes);
  for (int g = 0; g < prm.n_genes; ++g) {
    std::mt19937_64 rng(mix_seed(prm.seed, 1 + g));
    GeneTreeRecord rec = evolve_duplication_loss(out.species, prm.dl_rate, rng);
    if (prm.lgt_count > 0) {
      std::uniform_int_distribution<int> pick(0, prm.lgt_count);
      apply_lgt(rec, pick(rng), rng);
    }
    if (prm.deletion_fraction > 0) {
      std::uniform_real_distribution<double> frac(0.0, prm.deletion_fraction);
      int universe = prm.n_taxa;
      Bitset before = rec.gene_tree.label_set(universe);
      rec.gene_tree = delete_taxa(rec.gene_tree, frac(rng), rng);
      Bitset after = rec.gene_tree.label_set(universe);
      for (int a = 0; a < universe; ++a)
        if (before.test(a) && !after.test(a)) {
          ++rec.deletions;
          rec.events.push_back({-1, "delete", "species=" + std::to_string(a)});
        }
    }
    for (SimEvent& e : rec.events) e.gene = g;
    out.genes.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mulrf
