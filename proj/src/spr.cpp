#include "mulrf/spr.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>
#include <unordered_map>

namespace mulrf {

namespace {

int64_t pack_pair(int u, int v, int n) {
  if (u > v) std::swap(u, v);
  return static_cast<int64_t>(u) * n + v;
}

// Directed closed-tour steps (v, w) of the tree containing `start`, skipping
// the edge {skip_u, skip_v}; each edge is stepped once per direction.
void euler_steps(const std::vector<std::vector<int>>& adj, int start, int skip_u, int skip_v,
                 std::vector<std::pair<int, int>>& out) {
  out.clear();
  struct Frame {
    int v, from;
    size_t i = 0;
  };
  std::vector<Frame> stack{{start, -1}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.i < adj[f.v].size()) {
      int w = adj[f.v][f.i++];
      if (w == f.from) continue;
      if ((f.v == skip_u && w == skip_v) || (f.v == skip_v && w == skip_u)) continue;
      out.emplace_back(f.v, w);
      stack.push_back({w, f.v});
    } else {
      int v = f.v, from = f.from;
      stack.pop_back();
      if (from >= 0) out.emplace_back(v, from);
    }
  }
}

// Static geometry of the supertree being searched.
struct Geometry {
  int ns = 0;
  int universe = 0;
  std::vector<Edge> edges;  // edge id -> endpoints
  std::unordered_map<int64_t, int> edge_ids;
  std::vector<int> par;            // rooted-at-0 orientation
  std::vector<Bitset> below;       // labels in the subtree under v
  std::vector<int> below_vertices;
  Bitset all_labels;

  Geometry(const UnrootedTree& s, int universe_) : ns(s.vertex_count()), universe(universe_) {
    edges = s.edge_list();
    edge_ids.reserve(edges.size() * 2);
    for (size_t i = 0; i < edges.size(); ++i)
      edge_ids.emplace(pack_pair(edges[i].u, edges[i].v, ns), static_cast<int>(i));
    par.assign(ns, -2);
    below.assign(ns, Bitset(universe));
    below_vertices.assign(ns, 1);
    all_labels = s.label_set(universe);
    std::vector<int> order;
    order.reserve(ns);
    par[0] = -1;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int w : s.adj[v])
        if (par[w] == -2) {
          par[w] = v;
          stack.push_back(w);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      if (s.leaf_label[v] >= 0) below[v].set(s.leaf_label[v]);
      if (par[v] >= 0) {
        below[par[v]] = below[par[v]] | below[v];
        below_vertices[par[v]] += below_vertices[v];
      }
    }
  }

  int id_of(int u, int v) const {
    if (u >= ns || v >= ns) return -1;
    auto it = edge_ids.find(pack_pair(u, v, ns));
    return it == edge_ids.end() ? -1 : it->second;
  }
};

struct CutSides {
  int y = -1, h = -1;  // pruned anchor, host anchor
  Bitset pruned_labels, host_labels;
  int host_vertices = 0;
};

CutSides cut_sides(const Geometry& geo, Edge cut, int pruned_side) {
  CutSides cs;
  cs.y = pruned_side == 0 ? cut.u : cut.v;
  cs.h = pruned_side == 0 ? cut.v : cut.u;
  int child = geo.par[cut.v] == cut.u ? cut.v : cut.u;  // deeper endpoint
  Bitset child_labels = geo.below[child];
  int child_vertices = geo.below_vertices[child];
  if (cs.y == child) {
    cs.pruned_labels = child_labels;
    cs.host_labels = child_labels.complement() & geo.all_labels;
    cs.host_vertices = geo.ns - child_vertices;
  } else {
    cs.host_labels = child_labels;
    cs.pruned_labels = child_labels.complement() & geo.all_labels;
    cs.host_vertices = child_vertices;
  }
  return cs;
}

// Admissible regraft targets for one (cut, direction): the host component's
// edges except the two incident to the suppressed anchor, in the order first
// reached by the canonical host walk (started at the host's lowest-taxon
// leaf).  Empty when the host has no admissible edge.
std::vector<int> regraft_targets(const UnrootedTree& s, const Geometry& geo, Edge cut,
                                 const CutSides& cs) {
  std::vector<int> out;
  if (cs.host_vertices < 4) return out;  // nothing beyond the identity edges
  int start_taxon = cs.host_labels.lowest_set();
  int start = s.find_leaf(start_taxon);
  std::vector<std::pair<int, int>> steps;
  euler_steps(s.adj, start, cut.u, cut.v, steps);
  std::vector<char> seen(geo.edges.size(), 0);
  for (auto [a, b] : steps) {
    if (a == cs.h || b == cs.h) continue;
    int id = geo.id_of(a, b);
    if (id >= 0 && !seen[id]) {
      seen[id] = 1;
      out.push_back(id);
    }
  }
  return out;
}

// Per gene tree, per search call: multiplicities, the differentiated gene
// tree, the extended differentiated supertree (supertree vertex ids
// preserved; copy leaves appended), and cached rootings of the gene side.
struct GeneContext {
  std::vector<int> mult;
  Bitset labels;
  int copy_universe = 0;
  std::vector<int> first_copy;  // taxon -> first copy label, -1 if unused
  UnrootedTree t_diff;
  std::vector<std::vector<int>> hat_adj;
  std::vector<int> hat_label;  // copy label or -1
  std::vector<int> rho_leaf;   // taxon -> hat vertex carrying its first copy
  int64_t cur_rf = 0;
  std::map<int, RefSide> refs;  // root copy label -> reference bundle

  GeneContext(const MulTree& t, const UnrootedTree& s, const TaxonTable& taxa) {
    int universe = taxa.size();
    mult = t.label_multiplicity(universe);
    labels = t.label_set(universe);
    if (!labels.is_subset_of(s.label_set(universe)))
      throw TreeError("spr: gene tree taxon absent from supertree");
    first_copy.assign(universe, -1);
    Bitset slabels = s.label_set(universe);
    for (int a = 0; a < universe; ++a) {
      if (!slabels.test(a)) continue;
      first_copy[a] = copy_universe;
      copy_universe += std::max(mult[a], 1);
    }
    // Differentiated gene tree: copies numbered in depth-first leaf order.
    t_diff = t;
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
          t_diff.leaf_label[v] = first_copy[a] + next[a]++;
        }
        for (auto it = t.adj[v].rbegin(); it != t.adj[v].rend(); ++it)
          if (!seen[*it]) {
            seen[*it] = 1;
            stack.push_back(*it);
          }
      }
      t_diff = compact(t_diff);
    }
    // Extended supertree over copy labels, keeping s's vertex ids.
    int ns = s.vertex_count();
    hat_adj.assign(ns, {});
    hat_label.assign(ns, -1);
    rho_leaf.assign(universe, -1);
    for (int v = 0; v < ns; ++v) hat_adj[v] = s.adj[v];
    for (int v = 0; v < ns; ++v) {
      int a = s.leaf_label[v];
      if (a < 0) continue;
      if (mult[a] >= 2) {
        // v becomes the hub of a star of copies.
        for (int i = 0; i < mult[a]; ++i) {
          int w = static_cast<int>(hat_adj.size());
          hat_adj.emplace_back(std::vector<int>{v});
          hat_label.push_back(first_copy[a] + i);
          hat_adj[v].push_back(w);
          if (i == 0) rho_leaf[a] = w;
        }
      } else {
        hat_label[v] = first_copy[a];
        rho_leaf[a] = v;
      }
    }
    cur_rf = rf_multree_supertree(t, s, taxa);
  }

  const RefSide& ref_for(int root_copy) {
    auto it = refs.find(root_copy);
    if (it == refs.end())
      it = refs.emplace(root_copy, RefSide(root_at_taxon(t_diff, root_copy), copy_universe)).first;
    return it->second;
  }
};

// Mutable state of one incremental scan.  Reused across scans to keep
// allocations out of the hot path.
struct ScanWorkspace {
  std::vector<int> parent, rsize, mapv;
  std::vector<std::vector<int>> kids;
  std::vector<int> f;
  std::vector<std::pair<int, int>> walk, stack;
  std::vector<char> emitted;
  std::vector<int> emitted_dirty;

  void prepare(int nv, int ref_nv, int n_edges) {
    if (static_cast<int>(parent.size()) < nv) {
      parent.resize(nv);
      rsize.resize(nv);
      mapv.resize(nv);
      kids.resize(nv);
    }
    for (int v = 0; v < nv; ++v) kids[v].clear();
    f.assign(ref_nv, 0);
    if (static_cast<int>(emitted.size()) < n_edges) emitted.resize(n_edges, 0);
    for (int e : emitted_dirty) emitted[e] = 0;
    emitted_dirty.clear();
  }
};

class Scanner {
 public:
  Scanner(const Geometry& geo, const GeneContext& g, const RefSide& ref, ScanWorkspace& ws,
          bool self_check)
      : geo_(geo), g_(g), ref_(ref), ws_(ws), self_check_(self_check) {}

  // Runs the scan for (cut, sides); calls emit(s_edge_id, rf) once per
  // admissible regraft target.
  void run(Edge cut, const CutSides& cs, const std::function<void(int, int64_t)>& emit) {
    nh_ = static_cast<int>(g_.hat_adj.size());
    root_ = nh_;
    x_ = nh_ + 1;
    ws_.prepare(nh_ + 2, ref_.tree.vertex_count(), static_cast<int>(geo_.edges.size()));

    int rho_taxon = (g_.labels & cs.host_labels).lowest_set();
    rho_ = g_.rho_leaf[rho_taxon];
    w0_ = -1;
    for (int w : g_.hat_adj[rho_])
      w0_ = w;  // a leaf has exactly one neighbor
    y_ = cs.y;
    h_ = cs.h;
    // Host identity edges: the two host-side s-edges incident to the anchor.
    skip_a_ = skip_b_ = -1;
    for (int w : g_.hat_adj[h_]) {
      if (w == y_ || w >= geo_.ns) continue;
      int id = geo_.id_of(h_, w);
      (skip_a_ < 0 ? skip_a_ : skip_b_) = id;
    }

    build_base_tree();
    compute_base_state();
    int base_id = geo_.id_of(rho_, w0_);
    emit_edge(base_id, emit);

    euler_steps(g_.hat_adj, rho_, y_, h_, ws_.walk);
    Edge cur = make_edge(rho_, w0_);
    Edge base = cur;
    for (size_t i = 1; i < ws_.walk.size(); ++i) {
      auto [from, to] = ws_.walk[i];
      Edge next = make_edge(from, to);
      if (next == cur) continue;  // leaf bounce, same regraft edge
      if (next == base) break;    // closing step of the tour
      step(from, to);
      cur = next;
      if (self_check_) verify_state();
      emit_edge(geo_.id_of(from, to), emit);
    }
    (void)cut;
  }

 private:
  const Geometry& geo_;
  const GeneContext& g_;
  const RefSide& ref_;
  ScanWorkspace& ws_;
  bool self_check_;
  int nh_ = 0, root_ = -1, x_ = -1, rho_ = -1, w0_ = -1, y_ = -1, h_ = -1;
  int skip_a_ = -1, skip_b_ = -1;
  int fzero_ = 0, branch_ = 0;
  int64_t rf_ = 0;

  bool ref_internal(int u) const { return u != ref_.tree.root && !ref_.tree.is_leaf(u); }

  int lca_or(int a, int b) const {
    if (a < 0) return b;
    if (b < 0) return a;
    return ref_.index.lca(a, b);
  }

  int kept_count(int v) const {
    int kept = 0;
    for (int k : ws_.kids[v])
      if (ws_.rsize[k] > 0) ++kept;
    return kept;
  }

  // Retire / restore every term vertex v feeds into the distance: its match
  // of a reference cluster (through f and the zero count) and its own branch
  // contribution (kept-children >= 2, which shifts rf by one).  Call remove
  // before touching v's children or any (mapv, rsize), add after everything
  // settled.
  void remove_contrib(int v) {
    int u = ws_.mapv[v];
    if (u >= 0 && ref_.cluster_size[u] == ws_.rsize[v])
      if (--ws_.f[u] == 0 && ref_internal(u)) {
        ++fzero_;
        rf_ += 2;
      }
    if (kept_count(v) >= 2) {
      --branch_;
      --rf_;
    }
  }

  void add_contrib(int v) {
    int u = ws_.mapv[v];
    if (u >= 0 && ref_.cluster_size[u] == ws_.rsize[v])
      if (ws_.f[u]++ == 0 && ref_internal(u)) {
        --fzero_;
        rf_ -= 2;
      }
    if (kept_count(v) >= 2) {
      ++branch_;
      ++rf_;
    }
  }

  void emit_edge(int id, const std::function<void(int, int64_t)>& emit) {
    if (id < 0 || id == skip_a_ || id == skip_b_) return;
    if (ws_.emitted[id]) return;
    ws_.emitted[id] = 1;
    ws_.emitted_dirty.push_back(id);
    emit(id, rf_);
  }

  // Scan tree at the base position: the pruned component hangs from x on the
  // starting leaf's pendant edge, the root subdivides the edge above it.
  //
  //        root
  //        /  \          x carries the pruned component (below y) and is
  //      rho   x         slid along the host by the walk; the host anchor
  //           / \        h keeps degree 2 and stays transparent to the
  //          y   w0      cluster bookkeeping.
  void build_base_tree() {
    ws_.parent[root_] = -1;
    ws_.kids[root_] = {rho_, x_};
    ws_.parent[rho_] = root_;
    ws_.parent[x_] = root_;
    ws_.kids[x_] = {y_, w0_};
    ws_.parent[y_] = x_;
    ws_.parent[w0_] = x_;
    orient_from(w0_, rho_);
    orient_from(y_, h_);
  }

  // Orients the component below `top`, not crossing the cut or the vertex
  // `avoid` (used to keep rho and the cut partner out of the subtree).
  void orient_from(int top, int avoid) {
    auto& stack = ws_.stack;
    stack.clear();
    stack.emplace_back(top, avoid);
    while (!stack.empty()) {
      auto [v, skip] = stack.back();
      stack.pop_back();
      for (int w : g_.hat_adj[v]) {
        if (w == skip || w == ws_.parent[v]) continue;
        if ((v == y_ && w == h_) || (v == h_ && w == y_)) continue;
        ws_.parent[w] = v;
        ws_.kids[v].push_back(w);
        stack.emplace_back(w, -1);
      }
    }
  }

  void compute_base_state() {
    fzero_ = 0;
    branch_ = 0;
    compute_subtree(root_);
    for (int u = 0; u < ref_.tree.vertex_count(); ++u)
      if (ref_internal(u) && ws_.f[u] == 0) ++fzero_;
    rf_ = branch_ - ref_.internal_count + 2 * static_cast<int64_t>(fzero_);
  }

  // Postorder fill of rsize/mapv (and f) below v.
  void compute_subtree(int top) {
    auto& stack = ws_.stack;
    stack.clear();
    stack.emplace_back(top, 0);
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < static_cast<int>(ws_.kids[v].size())) {
        stack.emplace_back(ws_.kids[v][i++], 0);
        continue;
      }
      if (ws_.kids[v].empty()) {
        int l = v < nh_ ? g_.hat_label[v] : -1;
        int u = l >= 0 ? ref_.leaf_of_label[l] : -1;
        ws_.mapv[v] = u;
        ws_.rsize[v] = u >= 0 ? 1 : 0;
      } else {
        int acc = -1, sz = 0, kept = 0;
        for (int c : ws_.kids[v]) {
          if (ws_.rsize[c] > 0) {
            ++kept;
            sz += ws_.rsize[c];
            acc = lca_or(acc, ws_.mapv[c]);
          }
        }
        ws_.mapv[v] = acc;
        ws_.rsize[v] = sz;
        if (v != root_) {
          if (kept >= 2) ++branch_;
          int u = acc;
          if (u >= 0 && ref_.cluster_size[u] == sz) ++ws_.f[u];
        }
      }
      stack.pop_back();
    }
  }

  static void replace_child(std::vector<int>& kids, int from, int to) {
    for (int& k : kids)
      if (k == from) {
        k = to;
        return;
      }
    throw TreeError("spr scan: child bookkeeping out of sync");
  }

  // Moves x from its current edge onto the edge {b, c}; b is the shared
  // vertex.  Exactly three configurations are possible.
  void step(int b, int c) {
    auto& P = ws_.parent;
    auto& K = ws_.kids;
    auto& M = ws_.mapv;
    auto& R = ws_.rsize;
    if (P[b] == x_) {
      // Down through b: x was b's parent (holding y and b); now b takes x's
      // place and x descends onto the edge {b, c} with children y and c.
      int a = P[x_];
      remove_contrib(x_);
      remove_contrib(b);
      replace_child(K[a], x_, b);
      P[b] = a;
      replace_child(K[x_], b, c);
      P[c] = x_;
      replace_child(K[b], c, x_);
      P[x_] = b;
      M[b] = M[x_];
      R[b] = R[x_];
      M[x_] = lca_or(M[c], M[y_]);
      R[x_] = R[c] + R[y_];
      add_contrib(b);
      add_contrib(x_);
    } else if (P[x_] == b && P[b] != c) {
      // Sideways under b: x and c swap the subtrees a and c.  b's own cluster
      // is untouched but its child list changes, so its branch term must be
      // retired and restored like x's.
      int a = K[x_][1];
      remove_contrib(x_);
      remove_contrib(b);
      replace_child(K[x_], a, c);
      P[c] = x_;
      replace_child(K[b], c, a);
      P[a] = b;
      M[x_] = lca_or(M[c], M[y_]);
      R[x_] = R[c] + R[y_];
      add_contrib(b);
      add_contrib(x_);
    } else if (P[x_] == b && P[b] == c) {
      // Up through b: mirror of the first case.
      int a = K[x_][1];
      remove_contrib(x_);
      remove_contrib(b);
      replace_child(K[x_], a, b);
      replace_child(K[b], x_, a);
      P[a] = b;
      replace_child(K[c], b, x_);
      P[x_] = c;
      M[x_] = M[b];
      R[x_] = R[b];
      P[b] = x_;
      R[b] -= R[y_];
      int acc = -1;
      for (int k : K[b])
        if (R[k] > 0) acc = lca_or(acc, M[k]);
      M[b] = acc;
      add_contrib(b);
      add_contrib(x_);
    } else {
      throw TreeError("spr scan: walk step does not match any case");
    }
  }

  // Test hook: rebuilds every derived quantity from the structure arrays and
  // compares with the incrementally maintained state.
  void verify_state() {
    std::vector<int> save_map(ws_.mapv.begin(), ws_.mapv.begin() + nh_ + 2);
    std::vector<int> save_rsize(ws_.rsize.begin(), ws_.rsize.begin() + nh_ + 2);
    std::vector<int> save_f = ws_.f;
    int save_fzero = fzero_;
    int64_t save_rf = rf_;
    int save_branch = branch_;
    ws_.f.assign(ws_.f.size(), 0);
    compute_base_state();
    for (int v = 0; v < nh_ + 2; ++v) {
      bool in_tree = v == root_ || ws_.parent[v] >= 0;
      if (!in_tree) continue;
      if (ws_.mapv[v] != save_map[v] || ws_.rsize[v] != save_rsize[v])
        throw TreeError("spr scan self-check: mapping drift");
    }
    if (ws_.f != save_f || fzero_ != save_fzero || rf_ != save_rf)
      throw TreeError("spr scan self-check: vertex function drift");
    if (branch_ != save_branch)
      throw TreeError("spr scan self-check: branch count drift");
  }
};

}  // namespace

UnrootedTree apply_spr(const UnrootedTree& s, const SprMove& m) {
  int ns = s.vertex_count();
  auto has_edge = [&](int u, int v) {
    return u >= 0 && v >= 0 && u < ns && v < ns &&
           std::find(s.adj[u].begin(), s.adj[u].end(), v) != s.adj[u].end();
  };
  if (!has_edge(m.cut.u, m.cut.v)) throw TreeError("apply_spr: cut is not an edge");
  if (!has_edge(m.regraft.u, m.regraft.v)) throw TreeError("apply_spr: regraft is not an edge");
  int y = m.pruned_side == 0 ? m.cut.u : m.cut.v;
  int h = m.pruned_side == 0 ? m.cut.v : m.cut.u;
  if (m.regraft == m.cut) throw TreeError("apply_spr: regraft equals cut");
  if (m.regraft.u == h || m.regraft.v == h)
    throw TreeError("apply_spr: regraft reproduces the original tree");
  // The regraft edge must lie in the host component.
  {
    std::vector<char> seen(ns, 0);
    std::vector<int> stack{h};
    seen[h] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : s.adj[v]) {
        if ((v == h && w == y) || seen[w]) continue;
        seen[w] = 1;
        stack.push_back(w);
      }
    }
    if (!seen[m.regraft.u] || !seen[m.regraft.v])
      throw TreeError("apply_spr: regraft edge is not in the host component");
  }
  UnrootedTree out = s;
  auto drop = [](std::vector<int>& lst, int v) {
    lst.erase(std::find(lst.begin(), lst.end(), v));
  };
  drop(out.adj[y], h);
  drop(out.adj[h], y);
  int x = out.vertex_count();
  out.adj.emplace_back();
  out.leaf_label.push_back(-1);
  drop(out.adj[m.regraft.u], m.regraft.v);
  drop(out.adj[m.regraft.v], m.regraft.u);
  out.adj[m.regraft.u].push_back(x);
  out.adj[m.regraft.v].push_back(x);
  out.adj[x] = {m.regraft.u, m.regraft.v, y};
  out.adj[y].push_back(x);
  return suppress_degree_two(out);
}

std::vector<std::pair<SprMove, UnrootedTree>> spr_neighborhood(const UnrootedTree& s) {
  if (!s.is_binary()) throw TreeError("spr_neighborhood: tree must be binary");
  if (s.leaf_count() < 4) throw TreeError("spr_neighborhood: need at least 4 leaves");
  int universe = 1 + *std::max_element(s.leaf_label.begin(), s.leaf_label.end());
  Geometry geo(s, universe);
  std::vector<std::pair<SprMove, UnrootedTree>> out;
  for (const Edge& cut : geo.edges) {
    for (int side = 0; side < 2; ++side) {
      CutSides cs = cut_sides(geo, cut, side);
      for (int id : regraft_targets(s, geo, cut, cs)) {
        SprMove m{cut, side, geo.edges[id]};
        out.emplace_back(m, apply_spr(s, m));
      }
    }
  }
  return out;
}

std::vector<Edge> aleph_order(const UnrootedTree& fragment, int start_leaf) {
  if (!fragment.is_leaf(start_leaf)) throw TreeError("aleph_order: start must be a leaf");
  std::vector<std::pair<int, int>> steps;
  euler_steps(fragment.adj, start_leaf, -1, -1, steps);
  std::vector<Edge> out;
  out.reserve(steps.size());
  for (auto [a, b] : steps) out.push_back(make_edge(a, b));
  return out;
}

namespace {

void check_search_inputs(const Profile& p, const UnrootedTree& s) {
  if (!s.is_binary()) throw TreeError("spr_search: supertree must be binary");
  if (!s.is_singly_labeled()) throw TreeError("spr_search: supertree must be singly labeled");
  if (s.leaf_count() < 4) throw TreeError("spr_search: need at least 4 leaves");
  for (const MulTree& t : p.trees)
    if (!t.label_set(p.taxa.size()).is_subset_of(s.label_set(p.taxa.size())))
      throw TreeError("spr_search: gene tree taxon absent from supertree");
}

}  // namespace

std::vector<ScanEntry> scan_cut_edge(const UnrootedTree& s, const MulTree& t,
                                     const TaxonTable& taxa, Edge cut, int pruned_side,
                                     bool self_check) {
  Profile p{taxa, {t}};
  check_search_inputs(p, s);
  Geometry geo(s, taxa.size());
  if (geo.id_of(cut.u, cut.v) < 0) throw TreeError("scan_cut_edge: cut is not an edge");
  CutSides cs = cut_sides(geo, cut, pruned_side);
  std::vector<int> targets = regraft_targets(s, geo, cut, cs);
  std::vector<ScanEntry> out;
  if (targets.empty()) return out;
  GeneContext g(t, s, taxa);
  std::vector<int64_t> acc(geo.edges.size(), -1);
  if (!(g.labels & cs.host_labels).any() || !(g.labels & cs.pruned_labels).any()) {
    for (int id : targets) out.push_back({SprMove{cut, pruned_side, geo.edges[id]}, g.cur_rf});
    return out;
  }
  int rho_taxon = (g.labels & cs.host_labels).lowest_set();
  const RefSide& ref = g.ref_for(g.first_copy[rho_taxon]);
  ScanWorkspace ws;
  Scanner scanner(geo, g, ref, ws, self_check);
  scanner.run(cut, cs, [&](int id, int64_t rf) { acc[id] = rf; });
  for (int id : targets) {
    if (acc[id] < 0) throw TreeError("scan_cut_edge: target not covered by the walk");
    out.push_back({SprMove{cut, pruned_side, geo.edges[id]}, acc[id]});
  }
  return out;
}

SprSearchResult spr_search(const Profile& p, const UnrootedTree& s, int workers,
                           std::vector<ScanEntry>* all_moves) {
  check_search_inputs(p, s);
  Geometry geo(s, p.taxa.size());
  int k = static_cast<int>(p.trees.size());
  std::vector<GeneContext> ctx;
  ctx.reserve(k);
  for (const MulTree& t : p.trees) ctx.emplace_back(t, s, p.taxa);

  SprSearchResult res;
  for (const GeneContext& g : ctx) res.current_score += g.cur_rf;

  // Slot = one (cut, direction) with at least one admissible target.
  struct Slot {
    Edge cut;
    int side;
    CutSides cs;
    std::vector<int> targets;
    int64_t best = 0;
    int best_target = -1;
    std::vector<int64_t> totals;  // per target, only kept when reporting all
  };
  std::vector<Slot> slots;
  for (const Edge& cut : geo.edges)
    for (int side = 0; side < 2; ++side) {
      CutSides cs = cut_sides(geo, cut, side);
      std::vector<int> targets = regraft_targets(s, geo, cut, cs);
      if (!targets.empty()) slots.push_back({cut, side, std::move(cs), std::move(targets), 0, -1, {}});
    }

  // Pre-build every rooting the parallel phase will need; the caches are
  // read-only afterwards.
  for (const Slot& sl : slots)
    for (GeneContext& g : ctx) {
      Bitset in_host = g.labels & sl.cs.host_labels;
      if (!in_host.any() || !(g.labels & sl.cs.pruned_labels).any()) continue;
      g.ref_for(g.first_copy[in_host.lowest_set()]);
    }

  auto run_slot = [&](Slot& sl, ScanWorkspace& ws, std::vector<int64_t>& acc) {
    for (int id : sl.targets) acc[id] = 0;
    int64_t const_sum = 0;
    for (GeneContext& g : ctx) {
      Bitset in_host = g.labels & sl.cs.host_labels;
      if (!in_host.any() || !(g.labels & sl.cs.pruned_labels).any()) {
        const_sum += g.cur_rf;
        continue;
      }
      const RefSide& ref = g.refs.at(g.first_copy[in_host.lowest_set()]);
      Scanner scanner(geo, g, ref, ws, false);
      scanner.run(sl.cut, sl.cs, [&](int id, int64_t rf) { acc[id] += rf; });
    }
    sl.best_target = -1;
    if (all_moves) sl.totals.reserve(sl.targets.size());
    for (int id : sl.targets) {
      int64_t total = acc[id] + const_sum;
      if (all_moves) sl.totals.push_back(total);
      if (sl.best_target < 0 || total < sl.best) {
        sl.best = total;
        sl.best_target = id;
      }
    }
  };

  int nthreads = std::max(1, workers);
  if (nthreads == 1 || slots.size() <= 1) {
    ScanWorkspace ws;
    std::vector<int64_t> acc(geo.edges.size(), 0);
    for (Slot& sl : slots) run_slot(sl, ws, acc);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      ScanWorkspace ws;
      std::vector<int64_t> acc(geo.edges.size(), 0);
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= slots.size()) break;
        run_slot(slots[i], ws, acc);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const Slot& sl : slots) {
    if (sl.best_target < 0) continue;
    if (!res.has_move || sl.best < res.best_score) {
      res.has_move = true;
      res.best_score = sl.best;
      res.best_move = SprMove{sl.cut, sl.side, geo.edges[sl.best_target]};
    }
  }
  if (all_moves) {
    all_moves->clear();
    for (const Slot& sl : slots)
      for (size_t i = 0; i < sl.targets.size(); ++i)
        all_moves->push_back(
            {SprMove{sl.cut, sl.side, geo.edges[sl.targets[i]]}, sl.totals[i]});
  }
  return res;
}

}  // namespace mulrf
