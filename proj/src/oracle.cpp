#include "mulrf/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "mulrf/spr.hpp"

namespace mulrf {

DiffExhaustive rf_differentiation_exhaustive(const MulTree& t, const UnrootedTree& s,
                                             int universe) {
  Bitset lt = t.label_set(universe);
  if (!lt.is_subset_of(s.label_set(universe)))
    throw TreeError("differentiation oracle: query labels not a subset");
  UnrootedTree sr = restrict_to_labels(s, lt);
  std::vector<int> mt = t.label_multiplicity(universe);
  std::vector<int> ms = sr.label_multiplicity(universe);
  int dup_copies = 0;
  for (int a = 0; a < universe; ++a) {
    if (mt[a] == 0) continue;
    if (mt[a] > 3) throw TreeError("differentiation oracle: multiplicity above 3");
    if (mt[a] >= 2) dup_copies += mt[a];
    if (ms[a] != mt[a] && ms[a] != 1)
      throw TreeError("differentiation oracle: inconsistent multiplicities");
  }
  if (dup_copies > 10) throw TreeError("differentiation oracle: instance too large");

  // Copy label space: one block of mt[a] ids per taxon.
  std::vector<int> base(universe, -1);
  int cu = 0;
  for (int a = 0; a < universe; ++a)
    if (mt[a] > 0) {
      base[a] = cu;
      cu += mt[a];
    }

  // One fixed differentiation of t (depth-first leaf order).
  UnrootedTree td = t;
  {
    std::vector<int> next(universe, 0);
    std::vector<char> seen(t.vertex_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (t.is_leaf(v)) {
        int a = t.leaf_label[v];
        td.leaf_label[v] = base[a] + next[a]++;
      }
      for (auto it = t.adj[v].rbegin(); it != t.adj[v].rend(); ++it)
        if (!seen[*it]) {
          seen[*it] = 1;
          stack.push_back(*it);
        }
    }
  }

  // s side: single-copy labels relabel in place; duplicated labels with a
  // single s-leaf are expanded into a star of copies.
  UnrootedTree se = sr;
  std::vector<std::vector<int>> slots(universe);  // dup taxon -> copy leaf vertices
  for (int v = 0; v < sr.vertex_count(); ++v) {
    int a = sr.leaf_label[v];
    if (a < 0) continue;
    if (mt[a] == 1) {
      se.leaf_label[v] = base[a];
    } else if (ms[a] == mt[a]) {
      slots[a].push_back(v);
    } else {
      se.leaf_label[v] = -1;
      for (int i = 0; i < mt[a]; ++i) {
        int w = se.vertex_count();
        se.adj.push_back({v});
        se.leaf_label.push_back(-1);
        se.adj[v].push_back(w);
        slots[a].push_back(w);
      }
    }
  }

  std::vector<int> dup;
  for (int a = 0; a < universe; ++a)
    if (mt[a] >= 2) dup.push_back(a);
  std::vector<std::vector<int>> perm(dup.size());
  for (size_t j = 0; j < dup.size(); ++j) {
    perm[j].resize(mt[dup[j]]);
    std::iota(perm[j].begin(), perm[j].end(), 0);
  }

  std::vector<int64_t> values;
  while (true) {
    for (size_t j = 0; j < dup.size(); ++j) {
      int a = dup[j];
      for (size_t i = 0; i < slots[a].size(); ++i)
        se.leaf_label[slots[a][i]] = base[a] + perm[j][i];
    }
    values.push_back(rf_unrooted(td, se, cu));
    size_t j = 0;
    while (j < dup.size() && !std::next_permutation(perm[j].begin(), perm[j].end())) ++j;
    if (j == dup.size()) break;
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return {values.front(), values};
}

std::vector<UnrootedTree> enumerate_binary_supertrees(const std::vector<int>& taxa) {
  if (taxa.size() < 3 || taxa.size() > 8)
    throw TreeError("supertree enumeration: need 3 to 8 taxa");
  std::vector<int> sorted = taxa;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw TreeError("supertree enumeration: duplicate taxon");
  std::vector<UnrootedTree> cur{star_tree({sorted[0], sorted[1], sorted[2]})};
  for (size_t i = 3; i < sorted.size(); ++i) {
    std::vector<UnrootedTree> next;
    next.reserve(cur.size() * (2 * i - 3));
    for (const UnrootedTree& t : cur)
      for (const Edge& e : t.edge_list()) next.push_back(attach_leaf(t, sorted[i], e));
    cur = std::move(next);
  }
  return cur;
}

ExhaustiveOptimum exhaustive_optimum(const Profile& p) {
  int universe = p.taxa.size();
  Bitset all(universe);
  for (const MulTree& t : p.trees) all = all | t.label_set(universe);
  std::vector<int> labels;
  for (int a = 0; a < universe; ++a)
    if (all.test(a)) labels.push_back(a);
  if (labels.empty()) throw TreeError("exhaustive optimum: empty profile");
  if (labels.size() > 7) throw TreeError("exhaustive optimum: more than 7 taxa");
  ExhaustiveOptimum out;
  if (labels.size() < 3) {
    UnrootedTree s =
        labels.size() == 1 ? single_leaf_tree(labels[0]) : two_leaf_tree(labels[0], labels[1]);
    out.score = rf_profile(p, s).total;
    out.optima.push_back(std::move(s));
    return out;
  }
  bool first = true;
  for (UnrootedTree& s : enumerate_binary_supertrees(labels)) {
    int64_t score = rf_profile(p, s).total;
    if (first || score < out.score) {
      out.score = score;
      out.optima.clear();
      first = false;
    }
    if (score == out.score) out.optima.push_back(std::move(s));
  }
  return out;
}

OracleReport neighborhood_naive_check(const Profile& p, const UnrootedTree& s) {
  if (s.leaf_count() > 12) throw TreeError("neighborhood check: more than 12 leaves");
  OracleReport rep;
  rep.instance = std::to_string(s.leaf_count()) + " leaves, " +
                 std::to_string(p.trees.size()) + " trees";
  rep.agree = true;

  std::vector<ScanEntry> scanned;
  SprSearchResult res = spr_search(p, s, 1, &scanned);
  std::vector<std::pair<SprMove, UnrootedTree>> neighbors = spr_neighborhood(s);
  rep.cases = static_cast<int64_t>(scanned.size());
  rep.engine_value = res.best_score;

  if (scanned.size() != neighbors.size()) {
    rep.agree = false;
    rep.detail = "move count mismatch: scan " + std::to_string(scanned.size()) +
                 " vs enumeration " + std::to_string(neighbors.size());
    return rep;
  }
  bool first = true;
  for (size_t i = 0; i < scanned.size(); ++i) {
    if (!(scanned[i].move == neighbors[i].first)) {
      rep.agree = false;
      if (rep.detail.empty()) rep.detail = "move order mismatch at index " + std::to_string(i);
      continue;
    }
    int64_t naive = rf_profile(p, neighbors[i].second).total;
    if (first || naive < rep.oracle_value) {
      rep.oracle_value = naive;
      first = false;
    }
    if (naive != scanned[i].rf) {
      rep.agree = false;
      if (rep.detail.empty())
        rep.detail = "value mismatch at index " + std::to_string(i) + ": scan " +
                     std::to_string(scanned[i].rf) + " vs naive " + std::to_string(naive);
    }
  }
  if (rep.agree && rep.oracle_value != rep.engine_value) {
    rep.agree = false;
    rep.detail = "best-score mismatch";
  }
  return rep;
}

namespace {

std::string ahu_encode(const UnrootedTree& t, int v, int from) {
  std::vector<std::string> parts;
  for (int w : t.adj[v])
    if (w != from) parts.push_back(ahu_encode(t, w, v));
  std::sort(parts.begin(), parts.end());
  std::string s = "(";
  for (const std::string& part : parts) s += part;
  s += ")";
  if (t.leaf_label[v] >= 0) s += std::to_string(t.leaf_label[v]);
  return s;
}

std::vector<int> tree_centroids(const UnrootedTree& t) {
  int n = t.vertex_count();
  if (n == 1) return {0};
  std::vector<int> size(n, 1), order, par(n, -2);
  par[0] = -1;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : t.adj[v])
      if (par[w] == -2) {
        par[w] = v;
        stack.push_back(w);
      }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (par[*it] >= 0) size[par[*it]] += size[*it];
  int best = n + 1;
  std::vector<int> cents;
  for (int v = 0; v < n; ++v) {
    int heaviest = n - size[v];
    for (int w : t.adj[v])
      if (par[w] == v) heaviest = std::max(heaviest, size[w]);
    if (heaviest < best) {
      best = heaviest;
      cents = {v};
    } else if (heaviest == best) {
      cents.push_back(v);
    }
  }
  return cents;
}

std::string canonical_form(const UnrootedTree& t) {
  std::vector<int> cents = tree_centroids(t);
  if (cents.size() == 1) return ahu_encode(t, cents[0], -1);
  std::string a = ahu_encode(t, cents[0], cents[1]);
  std::string b = ahu_encode(t, cents[1], cents[0]);
  if (b < a) std::swap(a, b);
  return "[" + a + b + "]";
}

}  // namespace

bool multree_isomorphic(const MulTree& t1, const MulTree& t2) {
  if (t1.vertex_count() != t2.vertex_count() || t1.leaf_count() != t2.leaf_count()) return false;
  return canonical_form(t1) == canonical_form(t2);
}

std::pair<UnrootedTree, UnrootedTree> fig5_fixture(int k) {
  int m = k + 2;
  if (k < 6 || (m & (m - 1)) != 0)
    throw TreeError("fixture: k must be >= 6 with k+2 a power of two");
  auto build = [&](const std::vector<int>& arr) {
    UnrootedTree t;
    std::function<int(int, int)> rec = [&](int lo, int hi) -> int {
      int v = t.vertex_count();
      t.adj.emplace_back();
      if (hi - lo == 1) {
        t.leaf_label.push_back(arr[lo]);
        return v;
      }
      t.leaf_label.push_back(-1);
      int mid = (lo + hi) / 2;
      int a = rec(lo, mid);
      int b = rec(mid, hi);
      t.adj[v].push_back(a);
      t.adj[a].push_back(v);
      t.adj[v].push_back(b);
      t.adj[b].push_back(v);
      return v;
    };
    int top = rec(0, m);
    int anchor = t.vertex_count();
    t.adj.push_back({top});
    t.leaf_label.push_back(m);
    t.adj[top].push_back(anchor);
    return compact(t);
  };
  std::vector<int> straight(m);
  std::iota(straight.begin(), straight.end(), 0);
  // Same shape, but the two leaves of every cherry land in different halves.
  std::vector<int> shuffled;
  shuffled.reserve(m);
  for (int i = 0; i < m; i += 2) shuffled.push_back(i);
  for (int i = 1; i < m; i += 2) shuffled.push_back(i);
  return {build(straight), build(shuffled)};
}

}  // namespace mulrf
