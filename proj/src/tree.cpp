#include "mulrf/tree.hpp"

#include <algorithm>
#include <numeric>

namespace mulrf {

int UnrootedTree::leaf_count() const {
  int c = 0;
  for (int l : leaf_label) c += (l >= 0);
  return c;
}

std::vector<int> UnrootedTree::leaves() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

int UnrootedTree::edge_count() const {
  size_t twice = 0;
  for (const auto& a : adj) twice += a.size();
  return static_cast<int>(twice / 2);
}

std::vector<Edge> UnrootedTree::edge_list() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : adj[u])
      if (u < v) out.push_back(Edge{u, v});
  std::sort(out.begin(), out.end());
  return out;
}

int UnrootedTree::internal_edge_count() const {
  int c = 0;
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : adj[u])
      if (u < v && !is_leaf(u) && !is_leaf(v)) ++c;
  return c;
}

bool UnrootedTree::is_binary() const {
  for (int v = 0; v < vertex_count(); ++v)
    if (!is_leaf(v) && degree(v) != 3) return false;
  return true;
}

bool UnrootedTree::is_singly_labeled() const {
  std::vector<int> seen;
  for (int l : leaf_label)
    if (l >= 0) seen.push_back(l);
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

Bitset UnrootedTree::label_set(int universe) const {
  Bitset b(universe);
  for (int l : leaf_label)
    if (l >= 0) b.set(l);
  return b;
}

std::vector<int> UnrootedTree::label_multiplicity(int universe) const {
  std::vector<int> m(universe, 0);
  for (int l : leaf_label)
    if (l >= 0) ++m[l];
  return m;
}

int UnrootedTree::find_leaf(int taxon) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (leaf_label[v] == taxon) return v;
  return -1;
}

void UnrootedTree::validate() const {
  int n = vertex_count();
  if (n == 0) throw TreeError("empty tree");
  if (static_cast<int>(leaf_label.size()) != n) throw TreeError("label array size mismatch");
  if (edge_count() != n - 1) throw TreeError("edge count is not V - 1");
  // Connectivity.
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++reached;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  if (reached != n) throw TreeError("tree is not connected");
  for (int v = 0; v < n; ++v) {
    if (is_leaf(v)) {
      if (n > 1 && degree(v) != 1) throw TreeError("leaf with degree != 1");
    } else {
      if (degree(v) < 3) throw TreeError("internal vertex with degree < 3");
    }
  }
}

std::vector<int> RootedTree::postorder() const {
  std::vector<int> order;
  order.reserve(vertex_count());
  // Iterative DFS; children pushed in reverse so they pop in list order.
  std::vector<std::pair<int, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    if (ci < static_cast<int>(children[v].size())) {
      int c = children[v][ci++];
      stack.push_back({c, 0});
    } else {
      order.push_back(v);
      stack.pop_back();
    }
  }
  return order;
}

std::vector<int> RootedTree::internal_nonroot() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (v != root && !is_leaf(v)) out.push_back(v);
  return out;
}

int RootedTree::find_leaf(int taxon) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (leaf_label[v] == taxon) return v;
  return -1;
}

UnrootedTree single_leaf_tree(int taxon) {
  UnrootedTree t;
  t.adj.resize(1);
  t.leaf_label = {taxon};
  return t;
}

UnrootedTree two_leaf_tree(int a, int b) {
  UnrootedTree t;
  t.adj = {{1}, {0}};
  t.leaf_label = {a, b};
  return compact(t);
}

UnrootedTree star_tree(const std::vector<int>& taxa) {
  if (taxa.size() < 3) throw TreeError("star_tree needs >= 3 leaves");
  UnrootedTree t;
  int n = static_cast<int>(taxa.size());
  t.adj.resize(n + 1);
  t.leaf_label.assign(n + 1, -1);
  for (int i = 0; i < n; ++i) {
    t.leaf_label[i] = taxa[i];
    t.adj[i].push_back(n);
    t.adj[n].push_back(i);
  }
  return compact(t);
}

UnrootedTree compact(const UnrootedTree& t) {
  int n = t.vertex_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    bool la = t.is_leaf(a), lb = t.is_leaf(b);
    if (la != lb) return la;
    if (la) return std::pair(t.leaf_label[a], a) < std::pair(t.leaf_label[b], b);
    return a < b;
  });
  std::vector<int> newid(n);
  for (int i = 0; i < n; ++i) newid[order[i]] = i;
  UnrootedTree out;
  out.adj.resize(n);
  out.leaf_label.resize(n);
  for (int v = 0; v < n; ++v) {
    out.leaf_label[newid[v]] = t.leaf_label[v];
    out.adj[newid[v]].reserve(t.adj[v].size());
    for (int w : t.adj[v]) out.adj[newid[v]].push_back(newid[w]);
    std::sort(out.adj[newid[v]].begin(), out.adj[newid[v]].end());
  }
  return out;
}

namespace {

// Removes vertices not in `alive`, then suppresses degree-2 vertices.
UnrootedTree rebuild_suppressed(const UnrootedTree& t, const std::vector<char>& alive) {
  int n = t.vertex_count();
  // Adjacency restricted to alive vertices.
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u) {
    if (!alive[u]) continue;
    for (int v : t.adj[u])
      if (alive[v]) adj[u].push_back(v);
  }
  // Iteratively splice out degree-2 vertices (any vertex, labelled or not:
  // only unlabelled vertices can have degree 2 here since kept leaves keep
  // degree 1).
  std::vector<char> dead(n, 0);
  for (int u = 0; u < n; ++u) dead[u] = !alive[u];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < n; ++u) {
      if (dead[u] || t.leaf_label[u] >= 0) continue;
      if (adj[u].size() == 2) {
        int a = adj[u][0], b = adj[u][1];
        auto drop = [&](std::vector<int>& lst, int x, int add) {
          for (int& y : lst)
            if (y == x) {
              y = add;
              return;
            }
        };
        drop(adj[a], u, b);
        drop(adj[b], u, a);
        adj[u].clear();
        dead[u] = 1;
        changed = true;
      } else if (adj[u].size() == 1) {
        // Unlabelled pendant vertex left behind by the cut: remove it.
        int a = adj[u][0];
        adj[a].erase(std::find(adj[a].begin(), adj[a].end(), u));
        adj[u].clear();
        dead[u] = 1;
        changed = true;
      } else if (adj[u].empty()) {
        dead[u] = 1;
      }
    }
  }
  std::vector<int> newid(n, -1);
  int m = 0;
  for (int u = 0; u < n; ++u)
    if (!dead[u]) newid[u] = m++;
  UnrootedTree out;
  out.adj.resize(m);
  out.leaf_label.assign(m, -1);
  for (int u = 0; u < n; ++u) {
    if (dead[u]) continue;
    out.leaf_label[newid[u]] = t.leaf_label[u];
    for (int v : adj[u]) out.adj[newid[u]].push_back(newid[v]);
  }
  return compact(out);
}

}  // namespace

UnrootedTree restrict_leaves(const UnrootedTree& t, const std::vector<int>& keep) {
  if (keep.empty()) throw TreeError("restriction to an empty leaf set");
  int n = t.vertex_count();
  std::vector<char> kept(n, 0);
  for (int v : keep) {
    if (v < 0 || v >= n || !t.is_leaf(v)) throw TreeError("restriction set names a non-leaf");
    kept[v] = 1;
  }
  if (keep.size() == 1) return single_leaf_tree(t.leaf_label[keep[0]]);
  // Steiner subtree: repeatedly strip non-kept pendant vertices.
  std::vector<int> deg(n, 0);
  for (int v = 0; v < n; ++v) deg[v] = t.degree(v);
  std::vector<char> alive(n, 1);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (deg[v] <= 1 && !kept[v]) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    alive[v] = 0;
    for (int w : t.adj[v])
      if (alive[w] && --deg[w] == 1 && !kept[w]) queue.push_back(w);
  }
  return rebuild_suppressed(t, alive);
}

UnrootedTree restrict_to_labels(const UnrootedTree& t, const Bitset& labels) {
  std::vector<int> keep;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (t.is_leaf(v) && labels.test(t.leaf_label[v])) keep.push_back(v);
  return restrict_leaves(t, keep);
}

std::vector<Bitset> tree_splits(const UnrootedTree& t, int universe) {
  if (!t.is_singly_labeled()) throw TreeError("splits require a singly-labeled tree");
  std::vector<Bitset> out;
  int n = t.vertex_count();
  if (n < 2) return out;
  Bitset all = t.label_set(universe);
  int low = all.lowest_set();
  // Root arbitrarily at vertex 0 and collect per-vertex subtree label sets.
  std::vector<int> par(n, -2), order;
  order.reserve(n);
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
  std::vector<Bitset> below(n, Bitset(universe));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (t.is_leaf(v)) below[v].set(t.leaf_label[v]);
    if (par[v] >= 0)
      below[par[v]] = below[par[v]] | below[v];
  }
  for (int v = 1; v < n; ++v) {
    if (t.is_leaf(v) || t.is_leaf(par[v])) continue;  // internal edges only
    Bitset part = below[v];
    if (part.test(low)) part = part.complement() & all;
    out.push_back(std::move(part));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Bitset> tree_clusters(const RootedTree& t, int universe) {
  std::vector<Bitset> below(t.vertex_count(), Bitset(universe));
  std::vector<Bitset> out;
  for (int v : t.postorder()) {
    if (t.is_leaf(v)) below[v].set(t.leaf_label[v]);
    for (int c : t.children[v]) below[v] = below[v] | below[c];
    if (v != t.root && !t.is_leaf(v)) out.push_back(below[v]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RootedTree root_at_taxon(const UnrootedTree& t, int taxon) {
  int r = -1;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (t.leaf_label[v] == taxon) {
      if (r >= 0) throw TreeError("root taxon carried by multiple leaves");
      r = v;
    }
  if (r < 0) throw TreeError("root taxon absent from tree");
  if (t.vertex_count() < 2) throw TreeError("cannot root a single-vertex tree");
  int n = t.vertex_count();
  RootedTree out;
  out.root = n;  // new vertex subdividing r's pendant edge
  out.parent.assign(n + 1, -1);
  out.children.assign(n + 1, {});
  out.leaf_label = t.leaf_label;
  out.leaf_label.push_back(-1);
  int w = t.adj[r][0];
  out.parent[r] = out.root;
  out.parent[w] = out.root;
  out.children[out.root] = {r, w};
  // Orient the rest away from the root.
  std::vector<int> stack{w};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : t.adj[v]) {
      if (u == out.parent[v] || (v == w && u == r)) continue;
      out.parent[u] = v;
      out.children[v].push_back(u);
      stack.push_back(u);
    }
  }
  return out;
}

UnrootedTree unroot(const RootedTree& t) {
  int n = t.vertex_count();
  UnrootedTree out;
  out.adj.resize(n);
  out.leaf_label = t.leaf_label;
  for (int v = 0; v < n; ++v)
    if (v != t.root && t.parent[v] != t.root) {
      out.adj[v].push_back(t.parent[v]);
      out.adj[t.parent[v]].push_back(v);
    }
  auto& rc = t.children[t.root];
  if (rc.size() != 2) throw TreeError("unroot expects a two-child root");
  out.adj[rc[0]].push_back(rc[1]);
  out.adj[rc[1]].push_back(rc[0]);
  // Drop the root slot.
  std::vector<char> alive(n, 1);
  alive[t.root] = 0;
  UnrootedTree tmp;
  tmp.adj = std::move(out.adj);
  tmp.leaf_label = std::move(out.leaf_label);
  return rebuild_suppressed(tmp, alive);
}

UnrootedTree attach_leaf(const UnrootedTree& t, int label, Edge e) {
  if (label < 0) throw TreeError("attach_leaf: invalid label");
  UnrootedTree out = t;
  auto& au = out.adj[e.u];
  auto& av = out.adj[e.v];
  auto iu = std::find(au.begin(), au.end(), e.v);
  auto iv = std::find(av.begin(), av.end(), e.u);
  if (iu == au.end() || iv == av.end()) throw TreeError("attach_leaf: no such edge");
  int x = out.vertex_count();
  int leaf = x + 1;
  *iu = x;
  *iv = x;
  out.adj.push_back({e.u, e.v, leaf});
  out.leaf_label.push_back(-1);
  out.adj.push_back({x});
  out.leaf_label.push_back(label);
  return compact(out);
}

UnrootedTree contract_edge(const UnrootedTree& t, Edge e) {
  if (t.is_leaf(e.u) || t.is_leaf(e.v)) throw TreeError("contracting a pendant edge");
  bool found = false;
  for (int w : t.adj[e.u]) found |= (w == e.v);
  if (!found) throw TreeError("contract_edge: no such edge");
  UnrootedTree out = t;
  // Merge v into u.
  auto& au = out.adj[e.u];
  au.erase(std::find(au.begin(), au.end(), e.v));
  for (int w : out.adj[e.v]) {
    if (w == e.u) continue;
    au.push_back(w);
    for (int& x : out.adj[w])
      if (x == e.v) x = e.u;
  }
  out.adj[e.v].clear();
  // Rebuild without the dead slot.
  std::vector<char> alive(out.vertex_count(), 1);
  alive[e.v] = 0;
  return rebuild_suppressed(out, alive);
}

UnrootedTree refine_vertex(const UnrootedTree& t, int v, const std::vector<int>& side) {
  if (t.is_leaf(v)) throw TreeError("refine_vertex: leaf");
  int d = t.degree(v);
  if (d < 4) throw TreeError("refine_vertex: degree < 4");
  if (side.size() < 2 || static_cast<int>(side.size()) > d - 2)
    throw TreeError("refine_vertex: side size out of range");
  std::vector<char> in_side(t.vertex_count(), 0);
  for (int w : side) {
    bool found = false;
    for (int x : t.adj[v]) found |= (x == w);
    if (!found) throw TreeError("refine_vertex: side names a non-neighbor");
    in_side[w] = 1;
  }
  UnrootedTree out = t;
  int nv = out.vertex_count();
  out.adj.emplace_back();
  out.leaf_label.push_back(-1);
  auto& av = out.adj[v];
  av.erase(std::remove_if(av.begin(), av.end(), [&](int w) { return in_side[w]; }), av.end());
  av.push_back(nv);
  out.adj[nv].push_back(v);
  for (int w : side) {
    out.adj[nv].push_back(w);
    for (int& x : out.adj[w])
      if (x == v) x = nv;
  }
  return compact(out);
}

UnrootedTree suppress_degree_two(const UnrootedTree& t) {
  std::vector<char> alive(t.vertex_count(), 1);
  return rebuild_suppressed(t, alive);
}

bool same_topology(const UnrootedTree& a, const UnrootedTree& b, int universe) {
  if (!(a.label_set(universe) == b.label_set(universe))) return false;
  if (a.leaf_count() != b.leaf_count()) return false;
  return tree_splits(a, universe) == tree_splits(b, universe);
}

}  // namespace mulrf
