#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mulrf/taxa.hpp"
#include "mulrf/tree.hpp"

namespace mulrf {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line(line),
        column(column) {}
};

// One parsed file: all trees share one taxon table.
struct TreeDocument {
  TaxonTable taxa;
  std::vector<MulTree> trees;
  std::vector<int> source_lines;  // 1-based line where each tree starts
};

// Parses one or more semicolon-terminated Newick trees.  Branch lengths and
// internal node labels are accepted and discarded; quoted labels ('...', with
// '' as an escaped quote) and underscores are kept verbatim.  A top-level
// bifurcation is read as an unrooted tree (the artificial root is
// suppressed); multifurcations are preserved.  Duplicate leaf labels within
// one tree make it a mul-tree.  Pass `taxa` to extend an existing universe
// (so several files share ids).
TreeDocument parse_newick(const std::string& text, TaxonTable taxa = {});

// Canonical writer: siblings ordered by the smallest taxon name in their
// subtree (ties by emitted text), anchored to minimize the output, so equal
// topologies print identically regardless of vertex numbering.  Unrooted
// trees are emitted with a top-level trifurcation when the tree has an
// internal vertex, else as a leaf pair or single leaf.
std::string write_newick(const MulTree& t, const TaxonTable& taxa);

// Writer preserving the root (top-level bifurcation).
std::string write_newick_rooted(const RootedTree& t, const TaxonTable& taxa);

}  // namespace mulrf
