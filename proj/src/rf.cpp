#include "mulrf/rf.hpp"

#include <algorithm>
#include <string>

namespace mulrf {

MulTree extend_supertree(const UnrootedTree& s, const MulTree& t, int universe) {
  if (!s.is_singly_labeled()) throw TreeError("extend_supertree: supertree must be singly labeled");
  std::vector<int> mult = t.label_multiplicity(universe);
  Bitset slabels = s.label_set(universe);
  for (int a = 0; a < universe; ++a)
    if (mult[a] > 0 && !slabels.test(a))
      throw TreeError("extend_supertree: taxon of t absent from s");
  MulTree out = s;
  for (int v = 0, n = s.vertex_count(); v < n; ++v) {
    int a = s.leaf_label[v];
    if (a < 0 || mult[a] < 2) continue;
    // v becomes the hub; attach mult[a] fresh leaves labeled a.
    out.leaf_label[v] = -1;
    for (int i = 0; i < mult[a]; ++i) {
      int w = out.vertex_count();
      out.adj.emplace_back();
      out.leaf_label.push_back(a);
      out.adj[v].push_back(w);
      out.adj[w].push_back(v);
    }
  }
  return compact(out);
}

namespace {

// Leaves of `t` in depth-first order from the lowest vertex id.
std::vector<int> dfs_leaf_order(const UnrootedTree& t) {
  std::vector<int> order;
  int n = t.vertex_count();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (t.is_leaf(v)) order.push_back(v);
    // Reverse push so lower-id neighbors are visited first.
    for (auto it = t.adj[v].rbegin(); it != t.adj[v].rend(); ++it)
      if (!seen[*it]) {
        seen[*it] = 1;
        stack.push_back(*it);
      }
  }
  return order;
}

}  // namespace

Differentiation differentiate(const MulTree& t, const MulTree& s, const TaxonTable& taxa) {
  int universe = taxa.size();
  std::vector<int> mt = t.label_multiplicity(universe);
  std::vector<int> ms = s.label_multiplicity(universe);
  for (int a = 0; a < universe; ++a)
    if (mt[a] > 0 && ms[a] > 0 && mt[a] != ms[a])
      throw TreeError("differentiate: shared label with differing multiplicities");

  Differentiation d;
  d.first_copy.assign(universe, -1);
  d.copy_count.assign(universe, 0);
  for (int a = 0; a < universe; ++a) {
    int k = std::max(mt[a], ms[a]);
    if (k == 0) continue;
    d.copy_count[a] = k;
    if (k == 1) {
      d.first_copy[a] = d.copy_taxa.add(taxa.name_of(a));
    } else {
      for (int i = 1; i <= k; ++i) {
        int id = d.copy_taxa.add(taxa.name_of(a) + "#" + std::to_string(i));
        if (i == 1) d.first_copy[a] = id;
      }
    }
  }

  auto relabel = [&](const MulTree& src) {
    UnrootedTree out = src;
    std::vector<int> next(universe, 0);
    for (int v : dfs_leaf_order(src)) {
      int a = src.leaf_label[v];
      out.leaf_label[v] = d.first_copy[a] + next[a]++;
    }
    return compact(out);
  };
  d.t = relabel(t);
  d.s = relabel(s);
  return d;
}

int64_t rf_unrooted(const UnrootedTree& t1, const UnrootedTree& t2, int universe) {
  if (!t1.is_singly_labeled() || !t2.is_singly_labeled())
    throw TreeError("rf_unrooted: trees must be singly labeled");
  Bitset l1 = t1.label_set(universe);
  if (!l1.is_subset_of(t2.label_set(universe)))
    throw TreeError("rf_unrooted: L(t1) is not a subset of L(t2)");
  UnrootedTree r2 = restrict_to_labels(t2, l1);
  std::vector<Bitset> s1 = tree_splits(t1, universe);
  std::vector<Bitset> s2 = tree_splits(r2, universe);
  // Both sorted; count the symmetric difference by merge.
  size_t i = 0, j = 0;
  int64_t diff = 0;
  while (i < s1.size() && j < s2.size()) {
    if (s1[i] == s2[j]) {
      ++i;
      ++j;
    } else if (s1[i] < s2[j]) {
      ++diff;
      ++i;
    } else {
      ++diff;
      ++j;
    }
  }
  diff += static_cast<int64_t>(s1.size() - i) + static_cast<int64_t>(s2.size() - j);
  return diff;
}

RefSide::RefSide(RootedTree t, int universe) : tree(std::move(t)), index(tree) {
  int n = tree.vertex_count();
  cluster_size.assign(n, 0);
  leaf_of_label.assign(universe, -1);
  internal_count = 0;
  for (int v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      cluster_size[v] = 1;
      leaf_of_label[tree.leaf_label[v]] = v;
    } else {
      for (int c : tree.children[v]) cluster_size[v] += cluster_size[c];
      if (v != tree.root) ++internal_count;
    }
  }
}

MappingData lca_mapping(const RootedTree& s, const RefSide& ref) {
  int n = s.vertex_count();
  MappingData md;
  md.map.assign(n, -1);
  md.restricted_size.assign(n, 0);
  md.kept_children.assign(n, 0);
  for (int v : s.postorder()) {
    if (s.is_leaf(v)) {
      int l = s.leaf_label[v];
      int u = l < static_cast<int>(ref.leaf_of_label.size()) ? ref.leaf_of_label[l] : -1;
      if (u >= 0) {
        md.map[v] = u;
        md.restricted_size[v] = 1;
      }
      continue;
    }
    int acc = -1, sz = 0, kept = 0;
    for (int c : s.children[v]) {
      if (md.restricted_size[c] > 0) {
        ++kept;
        sz += md.restricted_size[c];
        acc = acc < 0 ? md.map[c] : ref.index.lca(acc, md.map[c]);
      }
    }
    md.map[v] = acc;
    md.restricted_size[v] = sz;
    md.kept_children[v] = kept;
  }
  return md;
}

RootedRf rf_rooted_full(const RefSide& ref, const RootedTree& s) {
  MappingData md = lca_mapping(s, ref);
  std::vector<int> f(ref.tree.vertex_count(), 0);
  RootedRf out;
  for (int v = 0; v < s.vertex_count(); ++v) {
    if (v == s.root || s.is_leaf(v)) continue;
    if (md.kept_children[v] >= 2) ++out.branch_count;
    int u = md.map[v];
    if (u >= 0 && ref.cluster_size[u] == md.restricted_size[v]) ++f[u];
  }
  for (int u = 0; u < ref.tree.vertex_count(); ++u)
    if (u != ref.tree.root && !ref.tree.is_leaf(u) && f[u] == 0) ++out.fzero;
  out.rf = out.branch_count - ref.internal_count + 2 * static_cast<int64_t>(out.fzero);
  return out;
}

int64_t rf_rooted(const RootedTree& reference, const RootedTree& subject, int universe) {
  // Both must be rooted at the same taxon: the leaf child of each root.
  auto root_taxon = [](const RootedTree& t) {
    for (int c : t.children[t.root])
      if (t.is_leaf(c)) return t.leaf_label[c];
    return -1;
  };
  if (root_taxon(reference) < 0 || root_taxon(reference) != root_taxon(subject))
    throw TreeError("rf_rooted: trees are not rooted at the same taxon");
  RefSide ref(reference, universe);
  return rf_rooted_full(ref, subject).rf;
}

int64_t rf_multree_supertree(const MulTree& t, const UnrootedTree& s, const TaxonTable& taxa) {
  int universe = taxa.size();
  Bitset m = t.label_set(universe);
  if (!m.is_subset_of(s.label_set(universe)))
    throw TreeError("rf_multree_supertree: M(t) is not a subset of L(s)");
  UnrootedTree sr = restrict_to_labels(s, m);
  MulTree sx = extend_supertree(sr, t, universe);
  Differentiation d = differentiate(t, sx, taxa);
  if (d.t.vertex_count() < 2) return 0;
  // Root taxon: first copy of the lexicographically smallest label of t.
  int best = -1;
  for (int a = 0; a < universe; ++a) {
    if (!m.test(a)) continue;
    if (best < 0 || taxa.name_of(a) < taxa.name_of(best)) best = a;
  }
  int r = d.first_copy[best];
  RootedTree rt = root_at_taxon(d.t, r);
  RootedTree rs = root_at_taxon(d.s, r);
  RefSide ref(std::move(rt), d.copy_taxa.size());
  return rf_rooted_full(ref, rs).rf;
}

ProfileRf rf_profile(const Profile& p, const UnrootedTree& s) {
  ProfileRf out;
  out.per_tree.reserve(p.trees.size());
  for (const MulTree& t : p.trees) {
    int64_t v = rf_multree_supertree(t, s, p.taxa);
    out.per_tree.push_back(v);
    out.total += v;
  }
  return out;
}

}  // namespace mulrf
