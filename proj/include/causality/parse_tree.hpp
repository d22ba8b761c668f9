#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "causality/label.hpp"

namespace causality {

struct Token {
  std::string text;
  int index = 0;

  bool operator==(const Token&) const = default;
};

// Fully labeled binary tree. A node is either a leaf carrying one token or an
// internal node with exactly two children. Trees are values: copying a tree
// copies all of its nodes, and nothing mutates a tree once built.
class ParseTree {
 public:
  static ParseTree leaf(Label label, std::string word);
  static ParseTree node(Label label, ParseTree left, ParseTree right);

  Label label() const { return label_; }
  bool is_leaf() const { return children_.empty(); }
  const std::string& word() const { return word_; }
  const ParseTree& left() const { return children_.at(0); }
  const ParseTree& right() const { return children_.at(1); }

  int leaf_count() const { return leaves_; }
  int node_count() const { return 2 * leaves_ - 1; }

  // Leaves in reading order.
  std::vector<Token> tokens() const;
  std::vector<std::string> words() const;

  ParseTree relabeled(Label label) const;

  bool operator==(const ParseTree& other) const;
  bool operator!=(const ParseTree& other) const { return !(*this == other); }

 private:
  ParseTree() = default;

  Label label_ = Label::Word;
  std::string word_;
  std::vector<ParseTree> children_;
  int leaves_ = 1;
};

// Number of tokens spanned by the node.
inline int ngram_length(const ParseTree& node) { return node.leaf_count(); }

// Post-order view of a tree: children precede parents, the root is last.
// `begin`/`end` are token indices, end exclusive.
struct FlatNode {
  Label label = Label::Word;
  int left = -1;
  int right = -1;
  int token = -1;
  int begin = 0;
  int end = 0;

  bool is_leaf() const { return left < 0; }
  int span_length() const { return end - begin; }
};

std::vector<FlatNode> flatten(const ParseTree& tree);

// --- bracketed format -------------------------------------------------------

class BracketError : public std::runtime_error {
 public:
  enum class Kind { UnbalancedParens, UnknownLabelId, NonBinaryNode, EmptyLeaf, UnexpectedCharacter };

  BracketError(Kind kind, std::size_t position, const std::string& detail);

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

// `tree := '(' id (tree tree | token) ')'`, any whitespace between items.
ParseTree parse_bracketed(std::string_view text);

// Canonical form: single space between siblings, no trailing whitespace.
// Parentheses inside tokens are written as -LRB- / -RRB-.
std::string serialize_bracketed(const ParseTree& tree);

// One tree per line; blank lines are skipped.
class TreebankError : public std::runtime_error {
 public:
  TreebankError(int line, const std::string& detail);
  int line() const { return line_; }

 private:
  int line_;
};

std::vector<ParseTree> read_treebank(std::istream& in);
std::vector<ParseTree> read_treebank_file(const std::string& path);
void write_treebank(std::ostream& out, const std::vector<ParseTree>& trees);

// --- schema lint ------------------------------------------------------------

struct SchemaViolation {
  enum class Kind { LeafWithInternalLabel, InternalWithLeafLabel, RootNotRootSentence, NestedRootSentence };

  Kind kind;
  int node = 0;  // post-order index, see flatten()
  Label label = Label::Word;

  bool operator==(const SchemaViolation&) const = default;
};

std::string_view to_string(SchemaViolation::Kind kind);

std::vector<SchemaViolation> validate_schema(const ParseTree& tree);

// --- tokenization -----------------------------------------------------------

struct TokenSpan {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the sentence
  std::size_t end = 0;
};

// Splits on whitespace and detaches trailing , . ; : ! ? (and surrounding
// parentheses / double quotes) as tokens of their own.
std::vector<TokenSpan> tokenize(std::string_view sentence);
std::vector<Token> tokenize_words(std::string_view sentence);

// Word, Punct or Symbol depending on the token's characters.
Label leaf_label_for(std::string_view token);

bool is_separator(std::string_view token);
bool is_final_punct(std::string_view token);

}  // namespace causality
