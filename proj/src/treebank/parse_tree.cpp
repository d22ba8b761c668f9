#include "causality/parse_tree.hpp"

#include <utility>

namespace causality {

ParseTree ParseTree::leaf(Label label, std::string word) {
  ParseTree t;
  t.label_ = label;
  t.word_ = std::move(word);
  t.leaves_ = 1;
  return t;
}

ParseTree ParseTree::node(Label label, ParseTree left, ParseTree right) {
  ParseTree t;
  t.label_ = label;
  t.leaves_ = left.leaves_ + right.leaves_;
  t.children_.reserve(2);
  t.children_.push_back(std::move(left));
  t.children_.push_back(std::move(right));
  return t;
}

ParseTree ParseTree::relabeled(Label label) const {
  ParseTree t = *this;
  t.label_ = label;
  return t;
}

namespace {

void collect_words(const ParseTree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(t.word());
    return;
  }
  collect_words(t.left(), out);
  collect_words(t.right(), out);
}

int flatten_into(const ParseTree& t, int& next_token, std::vector<FlatNode>& out) {
  FlatNode n;
  n.label = t.label();
  if (t.is_leaf()) {
    n.token = next_token++;
    n.begin = n.token;
    n.end = n.token + 1;
  } else {
    n.left = flatten_into(t.left(), next_token, out);
    n.right = flatten_into(t.right(), next_token, out);
    n.begin = out[n.left].begin;
    n.end = out[n.right].end;
  }
  out.push_back(n);
  return static_cast<int>(out.size()) - 1;
}

}  // namespace

std::vector<std::string> ParseTree::words() const {
  std::vector<std::string> out;
  out.reserve(leaves_);
  collect_words(*this, out);
  return out;
}

std::vector<Token> ParseTree::tokens() const {
  std::vector<Token> out;
  int i = 0;
  for (auto& w : words()) out.push_back(Token{std::move(w), i++});
  return out;
}

bool ParseTree::operator==(const ParseTree& other) const {
  if (label_ != other.label_ || leaves_ != other.leaves_ || children_.size() != other.children_.size())
    return false;
  if (is_leaf()) return word_ == other.word_;
  return children_[0] == other.children_[0] && children_[1] == other.children_[1];
}

std::vector<FlatNode> flatten(const ParseTree& tree) {
  std::vector<FlatNode> out;
  out.reserve(tree.node_count());
  int next = 0;
  flatten_into(tree, next, out);
  return out;
}

std::string_view to_string(SchemaViolation::Kind kind) {
  switch (kind) {
    case SchemaViolation::Kind::LeafWithInternalLabel: return "LeafWithInternalLabel";
    case SchemaViolation::Kind::InternalWithLeafLabel: return "InternalWithLeafLabel";
    case SchemaViolation::Kind::RootNotRootSentence: return "RootNotRootSentence";
    case SchemaViolation::Kind::NestedRootSentence: return "NestedRootSentence";
  }
  return "?";
}

std::vector<SchemaViolation> validate_schema(const ParseTree& tree) {
  using Kind = SchemaViolation::Kind;
  std::vector<SchemaViolation> out;
  const auto nodes = flatten(tree);
  const int root = static_cast<int>(nodes.size()) - 1;
  for (int i = 0; i <= root; ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf() && !allowed_on_leaf(n.label)) out.push_back({Kind::LeafWithInternalLabel, i, n.label});
    if (!n.is_leaf() && is_leaf_only(n.label)) out.push_back({Kind::InternalWithLeafLabel, i, n.label});
    if (i != root && n.label == Label::RootSentence) out.push_back({Kind::NestedRootSentence, i, n.label});
  }
  if (nodes[root].label != Label::RootSentence)
    out.push_back({Kind::RootNotRootSentence, root, nodes[root].label});
  return out;
}

}  // namespace causality
