#include "mulrf/newick.hpp"

#include <algorithm>
#include <cctype>

namespace mulrf {

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line, col); }
};

bool is_label_char(char c) {
  switch (c) {
    case '(':
    case ')':
    case ',':
    case ':':
    case ';':
    case '\'':
      return false;
    default:
      return !std::isspace(static_cast<unsigned char>(c));
  }
}

std::string read_label(Cursor& cur) {
  if (cur.peek() == '\'') {
    cur.take();
    std::string out;
    while (true) {
      if (cur.done()) cur.fail("unterminated quoted label");
      char c = cur.take();
      if (c == '\'') {
        if (!cur.done() && cur.peek() == '\'') {
          out.push_back('\'');
          cur.take();
        } else {
          break;
        }
      } else {
        out.push_back(c);
      }
    }
    if (out.empty()) cur.fail("empty quoted label");
    return out;
  }
  std::string out;
  while (!cur.done() && is_label_char(cur.peek())) out.push_back(cur.take());
  return out;
}

void skip_branch_length(Cursor& cur) {
  cur.skip_space();
  if (cur.done() || cur.peek() != ':') return;
  cur.take();
  cur.skip_space();
  size_t start = cur.pos;
  while (!cur.done()) {
    char c = cur.peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' ||
        c == 'e' || c == 'E')
      cur.take();
    else
      break;
  }
  if (cur.pos == start) cur.fail("expected branch length after ':'");
}

// Parses one subtree into `t`, returning its top vertex id.
int parse_subtree(Cursor& cur, UnrootedTree& t, TaxonTable& taxa) {
  cur.skip_space();
  if (cur.done()) cur.fail("unexpected end of input");
  if (cur.peek() == '(') {
    cur.take();
    int v = t.vertex_count();
    t.adj.emplace_back();
    t.leaf_label.push_back(-1);
    while (true) {
      int child = parse_subtree(cur, t, taxa);
      t.adj[v].push_back(child);
      t.adj[child].push_back(v);
      cur.skip_space();
      if (cur.done()) cur.fail("unterminated '('");
      char c = cur.peek();
      if (c == ',') {
        cur.take();
        continue;
      }
      if (c == ')') {
        cur.take();
        break;
      }
      cur.fail("expected ',' or ')'");
    }
    cur.skip_space();
    if (!cur.done() && (cur.peek() == '\'' || is_label_char(cur.peek())))
      read_label(cur);  // internal node label: discarded
    skip_branch_length(cur);
    return v;
  }
  std::string name = read_label(cur);
  if (name.empty()) cur.fail("expected a label");
  int v = t.vertex_count();
  t.adj.emplace_back();
  t.leaf_label.push_back(taxa.add(name));
  skip_branch_length(cur);
  return v;
}

}  // namespace

TreeDocument parse_newick(const std::string& text, TaxonTable taxa) {
  TreeDocument doc;
  doc.taxa = std::move(taxa);
  Cursor cur{text};
  cur.skip_space();
  if (cur.done()) cur.fail("no trees in input");
  while (!cur.done()) {
    int start_line = cur.line;
    UnrootedTree t;
    parse_subtree(cur, t, doc.taxa);
    cur.skip_space();
    if (cur.done() || cur.peek() != ';') cur.fail("expected ';'");
    cur.take();
    t = suppress_degree_two(t);
    if (t.leaf_count() < 1) cur.fail("tree has no leaves");
    t.validate();
    doc.trees.push_back(std::move(t));
    doc.source_lines.push_back(start_line);
    cur.skip_space();
  }
  return doc;
}

namespace {

bool needs_quoting(const std::string& name) {
  if (name.empty()) return true;
  for (char c : name)
    if (!is_label_char(c)) return true;
  return false;
}

std::string quoted(const std::string& name) {
  if (!needs_quoting(name)) return name;
  std::string out = "'";
  for (char c : name) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

// Emits the subtree of v away from `from`; returns the smallest taxon name in
// it (used to order siblings deterministically).
std::pair<std::string, std::string> emit_unrooted(const UnrootedTree& t, const TaxonTable& taxa,
                                                  int v, int from) {
  if (t.is_leaf(v)) {
    const std::string& n = taxa.name_of(t.leaf_label[v]);
    return {quoted(n), n};
  }
  std::vector<std::pair<std::string, std::string>> parts;  // (min_name, text)
  for (int w : t.adj[v]) {
    if (w == from) continue;
    auto [text, mn] = emit_unrooted(t, taxa, w, v);
    parts.emplace_back(mn, text);
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(',');
    out += parts[i].second;
  }
  out.push_back(')');
  return {out, parts.front().first};
}

}  // namespace

std::string write_newick(const MulTree& t, const TaxonTable& taxa) {
  if (t.vertex_count() == 1) return quoted(taxa.name_of(t.leaf_label[0])) + ";";
  // Anchor the emission at an internal neighbor of a leaf carrying the
  // overall smallest name, so the output has a top-level multifurcation.
  // Duplicated labels can offer several anchors; taking the smallest
  // emission keeps the output independent of vertex numbering.
  std::string least;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (t.is_leaf(v)) {
      const std::string& n = taxa.name_of(t.leaf_label[v]);
      if (least.empty() || n < least) least = n;
    }
  std::string out;
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v) || taxa.name_of(t.leaf_label[v]) != least) continue;
    int hub = t.adj[v][0];
    if (t.is_leaf(hub)) {  // two-leaf tree
      auto [a, an] = emit_unrooted(t, taxa, v, hub);
      auto [b, bn] = emit_unrooted(t, taxa, hub, v);
      if (bn < an) std::swap(a, b);
      return "(" + a + "," + b + ");";
    }
    std::string cand = emit_unrooted(t, taxa, hub, -1).first;
    if (out.empty() || cand < out) out = std::move(cand);
  }
  return out + ";";
}

namespace {

std::pair<std::string, std::string> emit_rooted(const RootedTree& t, const TaxonTable& taxa,
                                                int v) {
  if (t.is_leaf(v)) {
    const std::string& n = taxa.name_of(t.leaf_label[v]);
    return {quoted(n), n};
  }
  std::vector<std::pair<std::string, std::string>> parts;
  for (int c : t.children[v]) {
    auto [text, mn] = emit_rooted(t, taxa, c);
    parts.emplace_back(mn, text);
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(',');
    out += parts[i].second;
  }
  out.push_back(')');
  return {out, parts.front().first};
}

}  // namespace

std::string write_newick_rooted(const RootedTree& t, const TaxonTable& taxa) {
  return emit_rooted(t, taxa, t.root).first + ";";
}

}  // namespace mulrf
