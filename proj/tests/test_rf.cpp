#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "mulrf/newick.hpp"
#include "mulrf/oracle.hpp"
#include "mulrf/rf.hpp"
#include "mulrf/tree.hpp"

using namespace mulrf;

namespace {

MulTree tree_of(const std::string& text, TaxonTable& taxa) {
  TreeDocument doc = parse_newick(text, taxa);
  taxa = doc.taxa;
  return doc.trees[0];
}

// Symmetric difference of canonical split sets after restricting t2 to
// L(t1); the definition, computed the slow way.
int64_t rf_by_splits(const UnrootedTree& t1, const UnrootedTree& t2, int universe) {
  UnrootedTree r2 = restrict_to_labels(t2, t1.label_set(universe));
  std::vector<Bitset> a = tree_splits(t1, universe);
  std::vector<Bitset> b = tree_splits(r2, universe);
  int shared = 0;
  for (const Bitset& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) ++shared;
  return static_cast<int64_t>(a.size()) + static_cast<int64_t>(b.size()) - 2 * shared;
}

}  // namespace

TEST_CASE("unrooted distance on frozen pairs") {
  TaxonTable taxa;
  MulTree q1 = tree_of("((a,b),(c,d));", taxa);
  MulTree q2 = tree_of("((a,c),(b,d));", taxa);
  CHECK(rf_unrooted(q1, q1, taxa.size()) == 0);
  CHECK(rf_unrooted(q1, q2, taxa.size()) == 2);

  TaxonTable t6;
  MulTree cat = tree_of("(((((a,b),c),d),e),f);", t6);
  MulTree bal = tree_of("((a,b),(c,d),(e,f));", t6);
  CHECK(rf_unrooted(cat, bal, t6.size()) == 2);

  MulTree star = tree_of("(a,b,c,d,e,f);", t6);
  CHECK(rf_unrooted(star, cat, t6.size()) == 3);
  CHECK(rf_unrooted(cat, star, t6.size()) == 3);
}

TEST_CASE("unrooted distance restricts the larger tree") {
  TaxonTable taxa;
  MulTree small = tree_of("((a,b),(c,d));", taxa);
  MulTree big = tree_of("(((a,e),b),((c,f),d));", taxa);
  // big restricted to {a,b,c,d} is ab|cd: identical.
  CHECK(rf_unrooted(small, big, taxa.size()) == 0);
  MulTree small2 = tree_of("((a,c),(b,d));", taxa);
  CHECK(rf_unrooted(small2, big, taxa.size()) == 2);
}

TEST_CASE("unrooted distance equals the split-set definition") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 200; ++it) {
    int n2 = 4 + static_cast<int>(rng() % 9);
    int n1 = 4 + static_cast<int>(rng() % (n2 - 3));
    UnrootedTree t2 = testutil::random_binary_n(n2, rng);
    std::vector<int> sub(n2);
    for (int i = 0; i < n2; ++i) sub[i] = i;
    std::shuffle(sub.begin(), sub.end(), rng);
    sub.resize(n1);
    UnrootedTree t1 = testutil::random_binary(sub, rng);
    int64_t got = rf_unrooted(t1, t2, n2);
    CHECK(got == rf_by_splits(t1, t2, n2));
    if (n1 == n2) CHECK(got == rf_unrooted(t2, t1, n2));
  }
}

TEST_CASE("extend_supertree grows hubs for duplicated taxa") {
  TaxonTable taxa;
  MulTree t = tree_of("((a,b),(a,c));", taxa);
  MulTree s = tree_of("((a,b),(c,d));", taxa);
  MulTree ext = extend_supertree(s, t, taxa.size());
  ext.validate();
  CHECK(ext.leaf_count() == 5);
  std::vector<int> mult = ext.label_multiplicity(taxa.size());
  CHECK(mult[taxa.id_of("a")] == 2);
  CHECK(mult[taxa.id_of("b")] == 1);
  CHECK(mult[taxa.id_of("d")] == 1);
  // Both copies hang off one hub: contracting their common edge recovers s's
  // split bc|ad... the b,c side stays intact.
  CHECK(!ext.is_singly_labeled());
}

TEST_CASE("differentiate is deterministic and consistent") {
  TaxonTable taxa;
  MulTree t = tree_of("((a,b),(a,c));", taxa);
  MulTree s = tree_of("((a,c),(b,a));", taxa);
  Differentiation d1 = differentiate(t, s, taxa);
  Differentiation d2 = differentiate(t, s, taxa);
  d1.t.validate();
  d1.s.validate();
  CHECK(d1.t.is_singly_labeled());
  CHECK(d1.s.is_singly_labeled());
  CHECK(d1.copy_taxa.size() == 4);
  CHECK(d1.copy_count[taxa.id_of("a")] == 2);
  CHECK(d1.copy_count[taxa.id_of("b")] == 1);
  CHECK(d1.first_copy[taxa.id_of("a")] >= 0);
  CHECK(same_topology(d1.t, d2.t, d1.copy_taxa.size()));
  CHECK(same_topology(d1.s, d2.s, d2.copy_taxa.size()));

  MulTree bad = tree_of("((a,a),(a,b));", taxa);  // a three times
  CHECK_THROWS_AS(differentiate(t, bad, taxa), TreeError);
}

TEST_CASE("rooted distance on frozen pairs") {
  TaxonTable taxa;
  MulTree q1 = tree_of("((a,b),(c,d));", taxa);
  MulTree q2 = tree_of("((a,c),(b,d));", taxa);
  int a = taxa.id_of("a");
  RootedTree r1 = root_at_taxon(q1, a);
  RootedTree r2 = root_at_taxon(q2, a);
  CHECK(rf_rooted(r1, r1, taxa.size()) == 0);
  CHECK(rf_rooted(r1, r2, taxa.size()) == 2);

  RefSide ref(r1, taxa.size());
  CHECK(ref.internal_count == 2);
  RootedRf full = rf_rooted_full(ref, r2);
  CHECK(full.rf == 2);
  CHECK(full.fzero == 1);
  CHECK(full.branch_count == 2);
  RootedRf self = rf_rooted_full(ref, r1);
  CHECK(self.rf == 0);
  CHECK(self.fzero == 0);
}

TEST_CASE("rooted equals unrooted at every shared root taxon") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 60; ++it) {
    int n2 = 4 + static_cast<int>(rng() % 7);
    int n1 = 4 + static_cast<int>(rng() % (n2 - 3));
    UnrootedTree t2 = testutil::random_binary_n(n2, rng);
    std::vector<int> sub(n2);
    for (int i = 0; i < n2; ++i) sub[i] = i;
    std::shuffle(sub.begin(), sub.end(), rng);
    sub.resize(n1);
    UnrootedTree t1 = testutil::random_binary(sub, rng);
    int64_t split_rf = rf_unrooted(t1, t2, n2);
    UnrootedTree t2r = restrict_to_labels(t2, t1.label_set(n2));
    for (int taxon : sub) {
      RootedTree ref = root_at_taxon(t1, taxon);
      RootedTree sub_rt = root_at_taxon(t2r, taxon);
      CHECK(rf_rooted(ref, sub_rt, n2) == split_rf);
    }
  }
}

TEST_CASE("mul-tree versus supertree distance") {
  TaxonTable taxa;
  MulTree t = tree_of("((a,b),(a,c));", taxa);
  MulTree s3 = tree_of("(a,b,c);", taxa);
  CHECK(rf_multree_supertree(t, s3, taxa) == 2);

  // Singly labeled t degenerates to the unrooted distance.
  TaxonTable t2;
  MulTree p = tree_of("((a,b),(c,d));", t2);
  MulTree q = tree_of("(((a,c),b),(d,e));", t2);
  CHECK(rf_multree_supertree(p, q, t2) == rf_unrooted(p, q, t2.size()));

  // Tiny gene trees carry no splits.
  TaxonTable t3;
  MulTree pair = tree_of("(a,b);", t3);
  MulTree host = tree_of("((a,b),(c,d));", t3);
  CHECK(rf_multree_supertree(pair, host, t3) == 0);
}

TEST_CASE("mul-tree distance agrees with exhaustive differentiation") {
  std::mt19937_64 rng(123);
  int done = 0;
  while (done < 25) {
    int ns = 4 + static_cast<int>(rng() % 4);  // supertree taxa
    TaxonTable taxa;
    std::vector<int> labels;
    for (int i = 0; i < ns; ++i) labels.push_back(taxa.add(std::string(1, char('a' + i))));
    UnrootedTree s = testutil::random_binary(labels, rng);
    MulTree t = testutil::random_multree(labels, 3 + static_cast<int>(rng() % 5), 3, rng);
    DiffExhaustive ex;
    try {
      ex = rf_differentiation_exhaustive(t, s, ns);
    } catch (const TreeError&) {
      continue;  // multiplicity guard tripped; resample
    }
    ++done;
    REQUIRE(!ex.values.empty());
    CHECK(ex.values.size() == 1);  // every differentiation gives one value
    CHECK(ex.min == ex.values.front());
    CHECK(rf_multree_supertree(t, s, taxa) == ex.min);
  }
}

TEST_CASE("profile distance sums per-tree values") {
  TaxonTable taxa;
  MulTree g1 = tree_of("((a,b),(a,c));", taxa);
  MulTree g2 = tree_of("((a,c),(b,d));", taxa);
  MulTree s = tree_of("((a,b),(c,d));", taxa);
  Profile p{taxa, {g1, g2}};
  ProfileRf r = rf_profile(p, s);
  REQUIRE(r.per_tree.size() == 2);
  CHECK(r.per_tree[0] == rf_multree_supertree(g1, s, taxa));
  CHECK(r.per_tree[1] == rf_multree_supertree(g2, s, taxa));
  CHECK(r.total == r.per_tree[0] + r.per_tree[1]);
}
