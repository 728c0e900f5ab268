#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "mulrf/newick.hpp"
#include "mulrf/tree.hpp"

using namespace mulrf;

TEST_CASE("basic parse") {
  TreeDocument doc = parse_newick("(a,b,(c,d));");
  REQUIRE(doc.trees.size() == 1);
  CHECK(doc.taxa.size() == 4);
  CHECK(doc.taxa.id_of("a") == 0);
  CHECK(doc.taxa.id_of("d") == 3);
  const MulTree& t = doc.trees[0];
  t.validate();
  CHECK(t.leaf_count() == 4);
  CHECK(t.internal_edge_count() == 1);
  CHECK(doc.source_lines == std::vector<int>{1});
}

TEST_CASE("top-level bifurcation is unrooted, multifurcations survive") {
  TreeDocument doc = parse_newick("((a,b),(c,d));\n(a,b,c,d);");
  REQUIRE(doc.trees.size() == 2);
  CHECK(doc.source_lines == std::vector<int>{1, 2});
  CHECK(doc.trees[0].vertex_count() == 6);  // artificial root suppressed
  CHECK(doc.trees[0].is_binary());
  CHECK(doc.trees[1].vertex_count() == 5);  // star kept as-is
  CHECK(doc.trees[1].internal_edge_count() == 0);
}

TEST_CASE("branch lengths and internal labels are discarded") {
  TreeDocument plain = parse_newick("((a,b),(c,d));");
  TreeDocument deco = parse_newick("((a:1.5,b:2e-3)x:3,(c,d)y:0.1)root;");
  CHECK(same_topology(plain.trees[0], deco.trees[0], 4));
  CHECK(deco.taxa.size() == 4);  // x, y, root are not taxa
}

TEST_CASE("quoted names and underscores are verbatim") {
  TreeDocument doc = parse_newick("(('sp one','don''t'),(under_score,d));");
  CHECK(doc.taxa.id_of("sp one") == 0);
  CHECK(doc.taxa.id_of("don't") == 1);
  CHECK(doc.taxa.id_of("under_score") == 2);
  std::string out = write_newick(doc.trees[0], doc.taxa);
  CHECK(out.find("'sp one'") != std::string::npos);
  CHECK(out.find("'don''t'") != std::string::npos);
  CHECK(parse_newick(out).taxa.id_of("don't") >= 0);
}

TEST_CASE("duplicate labels make a mul-tree") {
  TreeDocument doc = parse_newick("((a,b),(a,c));");
  const MulTree& t = doc.trees[0];
  CHECK(!t.is_singly_labeled());
  std::vector<int> mult = t.label_multiplicity(doc.taxa.size());
  CHECK(mult[doc.taxa.id_of("a")] == 2);
  CHECK(mult[doc.taxa.id_of("b")] == 1);
}

TEST_CASE("a shared table keeps ids stable across files") {
  TreeDocument one = parse_newick("((a,b),(c,d));");
  TreeDocument two = parse_newick("((d,c),(b,x));", one.taxa);
  CHECK(two.taxa.id_of("a") == one.taxa.id_of("a"));
  CHECK(two.taxa.id_of("d") == one.taxa.id_of("d"));
  CHECK(two.taxa.id_of("x") == 4);
}

TEST_CASE("writer output is canonical") {
  // Same topology in scrambled input order comes out identically.
  TreeDocument a = parse_newick("((d,c),(b,a));");
  CHECK(write_newick(a.trees[0], a.taxa) == "(a,b,(c,d));");
  TreeDocument b = parse_newick("((a,b),(c,d));");
  CHECK(write_newick(b.trees[0], b.taxa) == "(a,b,(c,d));");

  CHECK(write_newick(parse_newick("(a,b);", b.taxa).trees[0], b.taxa) == "(a,b);");
  CHECK(write_newick(single_leaf_tree(0), b.taxa) == "a;");
}

TEST_CASE("writer round-trips mul-trees stably") {
  TreeDocument doc = parse_newick("(((a,b),(a,c)),(b,(b,e)));");
  std::string once = write_newick(doc.trees[0], doc.taxa);
  TreeDocument again = parse_newick(once, doc.taxa);
  CHECK(write_newick(again.trees[0], doc.taxa) == once);
  CHECK(again.trees[0].leaf_count() == doc.trees[0].leaf_count());
  CHECK(again.trees[0].label_multiplicity(doc.taxa.size()) ==
        doc.trees[0].label_multiplicity(doc.taxa.size()));
}

TEST_CASE("rooted writer keeps the root bifurcation") {
  TreeDocument doc = parse_newick("((a,b),(c,d));");
  RootedTree rt = root_at_taxon(doc.trees[0], doc.taxa.id_of("a"));
  CHECK(write_newick_rooted(rt, doc.taxa) == "(a,(b,(c,d)));");
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_AS(parse_newick("((a,b);"), ParseError);
  CHECK_THROWS_AS(parse_newick("(a,,b);"), ParseError);
  CHECK_THROWS_AS(parse_newick("(a,b)"), ParseError);
  CHECK_THROWS_AS(parse_newick("(a,'b);"), ParseError);
  try {
    parse_newick("(a,b,(c,d));\n((e,f);");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column >= 1);
  }
}
