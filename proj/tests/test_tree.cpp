#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "mulrf/tree.hpp"

using namespace mulrf;

namespace {

// Quartet 01|23: leaves 0..3, internal 4 (adj 0,1,5) and 5 (adj 2,3,4).
UnrootedTree quartet() {
  UnrootedTree t;
  t.adj = {{4}, {4}, {5}, {5}, {0, 1, 5}, {2, 3, 4}};
  t.leaf_label = {0, 1, 2, 3, -1, -1};
  return t;
}

Bitset bits(std::initializer_list<int> xs, int universe) {
  Bitset b(universe);
  for (int x : xs) b.set(x);
  return b;
}

}  // namespace

TEST_CASE("degenerate constructors") {
  UnrootedTree one = single_leaf_tree(7);
  CHECK(one.vertex_count() == 1);
  CHECK(one.leaf_count() == 1);
  CHECK(one.edge_count() == 0);
  one.validate();

  UnrootedTree two = two_leaf_tree(3, 1);
  CHECK(two.vertex_count() == 2);
  CHECK(two.edge_count() == 1);
  two.validate();

  UnrootedTree s = star_tree({0, 1, 2, 3});
  CHECK(s.leaf_count() == 4);
  CHECK(s.internal_edge_count() == 0);
  CHECK(!s.is_binary());
  s.validate();
}

TEST_CASE("quartet basics") {
  UnrootedTree t = quartet();
  t.validate();
  CHECK(t.is_binary());
  CHECK(t.is_singly_labeled());
  CHECK(t.leaf_count() == 4);
  CHECK(t.edge_count() == 5);
  CHECK(t.internal_edge_count() == 1);
  CHECK(t.leaves() == std::vector<int>{0, 1, 2, 3});
  CHECK(t.find_leaf(2) == 2);
  CHECK(t.find_leaf(9) == -1);

  std::vector<Edge> edges = t.edge_list();
  CHECK(edges.size() == 5);
  CHECK(std::is_sorted(edges.begin(), edges.end()));
  CHECK(edges[0] == make_edge(4, 0));
}

TEST_CASE("label sets and multiplicities") {
  MulTree t = star_tree({2, 5, 2});
  Bitset ls = t.label_set(8);
  CHECK(ls.count() == 2);
  CHECK(ls.test(2));
  CHECK(ls.test(5));
  std::vector<int> mult = t.label_multiplicity(8);
  CHECK(mult[2] == 2);
  CHECK(mult[5] == 1);
  CHECK(mult[0] == 0);
  CHECK(!t.is_singly_labeled());
}

TEST_CASE("attach_leaf subdivides the chosen edge") {
  UnrootedTree t = quartet();
  UnrootedTree grown = attach_leaf(t, 4, make_edge(4, 5));
  grown.validate();
  CHECK(grown.leaf_count() == 5);
  CHECK(grown.is_binary());
  CHECK(grown.find_leaf(4) >= 0);
  // The new leaf sits between the old cherries: splits are 01|234, 23|014
  // and the new central 4-01 / 4-23 structure keeps both old splits.
  std::vector<Bitset> sp = tree_splits(grown, 5);
  CHECK(sp.size() == 2);
  CHECK(std::find(sp.begin(), sp.end(), bits({2, 3}, 5)) != sp.end());
  CHECK(std::find(sp.begin(), sp.end(), bits({2, 3, 4}, 5)) != sp.end());

  CHECK_THROWS_AS(attach_leaf(t, 4, make_edge(0, 3)), TreeError);
}

TEST_CASE("compact puts leaves first in label order") {
  UnrootedTree t = quartet();
  // Scramble: swap roles of vertices by renaming through attach/restrict.
  UnrootedTree grown = attach_leaf(t, 6, make_edge(2, 5));
  UnrootedTree c = compact(grown);
  c.validate();
  std::vector<int> ll;
  for (int v : c.leaves()) ll.push_back(c.leaf_label[v]);
  CHECK(std::is_sorted(ll.begin(), ll.end()));
  CHECK(c.leaves() == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("tree_splits of the quartet") {
  std::vector<Bitset> sp = tree_splits(quartet(), 4);
  REQUIRE(sp.size() == 1);
  // Canonical side avoids taxon 0.
  CHECK(sp[0] == bits({2, 3}, 4));
}

TEST_CASE("restrict_to_labels keeps induced topology") {
  UnrootedTree t = quartet();
  UnrootedTree grown = attach_leaf(t, 4, make_edge(4, 5));  // 01|4|23 caterpillar
  Bitset keep(5);
  keep.set(0);
  keep.set(2);
  keep.set(4);
  UnrootedTree r = restrict_to_labels(grown, keep);
  r.validate();
  CHECK(r.leaf_count() == 3);
  CHECK(r.internal_edge_count() == 0);
  CHECK(tree_splits(r, 5).empty());

  Bitset pair(5);
  pair.set(1);
  pair.set(3);
  UnrootedTree two = restrict_to_labels(grown, pair);
  two.validate();
  CHECK(two.vertex_count() == 2);
}

TEST_CASE("root_at_taxon and unroot round-trip") {
  UnrootedTree t = quartet();
  RootedTree rt = root_at_taxon(t, 2);
  CHECK(rt.root >= 0);
  CHECK(rt.children[rt.root].size() == 2);
  CHECK(rt.leaf_label[rt.find_leaf(2)] == 2);
  // Root children: the taxon-2 leaf and the rest.
  int leaf2 = rt.find_leaf(2);
  CHECK((rt.children[rt.root][0] == leaf2 || rt.children[rt.root][1] == leaf2));

  std::vector<int> post = rt.postorder();
  CHECK(post.size() == static_cast<size_t>(rt.vertex_count()));
  CHECK(post.back() == rt.root);
  CHECK(rt.internal_nonroot().size() == 2);

  UnrootedTree back = unroot(rt);
  back.validate();
  CHECK(same_topology(back, t, 4));
}

TEST_CASE("tree_clusters of the rooted quartet") {
  RootedTree rt = root_at_taxon(quartet(), 0);
  std::vector<Bitset> cl = tree_clusters(rt, 4);
  std::sort(cl.begin(), cl.end());
  REQUIRE(cl.size() == 2);
  std::vector<Bitset> want = {bits({1, 2, 3}, 4), bits({2, 3}, 4)};
  std::sort(want.begin(), want.end());
  CHECK(cl == want);
}

TEST_CASE("contract and refine are inverse up to topology") {
  UnrootedTree t = quartet();
  UnrootedTree star = contract_edge(t, make_edge(4, 5));
  star.validate();
  CHECK(star.internal_edge_count() == 0);
  CHECK(star.leaf_count() == 4);
  // Refine back: move leaves labelled 2 and 3 onto a new vertex.
  int hub = -1;
  for (int v = 0; v < star.vertex_count(); ++v)
    if (!star.is_leaf(v)) hub = v;
  REQUIRE(hub >= 0);
  std::vector<int> side;
  for (int w : star.adj[hub])
    if (star.leaf_label[w] == 2 || star.leaf_label[w] == 3) side.push_back(w);
  UnrootedTree again = refine_vertex(star, hub, side);
  again.validate();
  CHECK(same_topology(again, t, 4));
}

TEST_CASE("same_topology distinguishes the three quartets") {
  UnrootedTree a = quartet();  // 01|23
  UnrootedTree b;
  b.adj = {{4}, {5}, {4}, {5}, {0, 2, 5}, {1, 3, 4}};  // 02|13
  b.leaf_label = {0, 1, 2, 3, -1, -1};
  b.validate();
  CHECK(!same_topology(a, b, 4));
  CHECK(same_topology(a, a, 4));
}

TEST_CASE("suppress_degree_two splices unlabelled chains") {
  UnrootedTree t;
  // 0 - a - b - 1 with labels only at the ends.
  t.adj = {{2}, {3}, {0, 3}, {1, 2}};
  t.leaf_label = {5, 6, -1, -1};
  UnrootedTree s = suppress_degree_two(t);
  s.validate();
  CHECK(s.vertex_count() == 2);
  CHECK(s.edge_count() == 1);
}

TEST_CASE("validate rejects malformed graphs") {
  UnrootedTree bad;
  bad.adj = {{1}, {0}, {}};  // disconnected extra vertex
  bad.leaf_label = {0, 1, 2};
  CHECK_THROWS_AS(bad.validate(), TreeError);

  UnrootedTree deg2;
  deg2.adj = {{1}, {0, 2}, {1}};
  deg2.leaf_label = {0, -1, 1};
  CHECK_THROWS_AS(deg2.validate(), TreeError);
}

TEST_CASE("random trees stay valid under restriction") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 50; ++it) {
    UnrootedTree t = testutil::random_binary_n(10, rng);
    t.validate();
    CHECK(t.is_binary());
    CHECK(t.leaf_count() == 10);
    Bitset keep(10);
    std::uniform_int_distribution<int> coin(0, 1);
    int kept = 0;
    for (int i = 0; i < 10; ++i)
      if (coin(rng)) {
        keep.set(i);
        ++kept;
      }
    if (kept < 1) {
      keep.set(0);
      kept = 1;
    }
    UnrootedTree r = restrict_to_labels(t, keep);
    r.validate();
    CHECK(r.leaf_count() == kept);
    if (kept >= 3) CHECK(r.is_binary());
  }
}
