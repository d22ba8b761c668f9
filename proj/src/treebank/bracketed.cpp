#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "causality/parse_tree.hpp"

namespace causality {

namespace {

const char* kind_name(BracketError::Kind kind) {
  switch (kind) {
    case BracketError::Kind::UnbalancedParens: return "unbalanced parentheses";
    case BracketError::Kind::UnknownLabelId: return "unknown label id";
    case BracketError::Kind::NonBinaryNode: return "node is not binary";
    case BracketError::Kind::EmptyLeaf: return "empty leaf";
    case BracketError::Kind::UnexpectedCharacter: return "unexpected character";
  }
  return "?";
}

std::string escape_token(const std::string& word) {
  std::string out;
  for (char c : word) {
    if (c == '(') out += "-LRB-";
    else if (c == ')') out += "-RRB-";
    else out.push_back(c);
  }
  return out;
}

std::string unescape_token(std::string_view raw) {
  std::string out;
  for (std::size_t i = 0; i < raw.size();) {
    if (raw.substr(i, 5) == "-LRB-") {
      out.push_back('(');
      i += 5;
    } else if (raw.substr(i, 5) == "-RRB-") {
      out.push_back(')');
      i += 5;
    } else {
      out.push_back(raw[i++]);
    }
  }
  return out;
}

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  ParseTree parse() {
    skip_ws();
    ParseTree t = parse_tree();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') fail(BracketError::Kind::UnbalancedParens, "extra ')'");
      fail(BracketError::Kind::UnexpectedCharacter, "text after the root node");
    }
    return t;
  }

 private:
  [[noreturn]] void fail(BracketError::Kind kind, const std::string& detail) const {
    throw BracketError(kind, pos_, detail);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void expect_close() {
    skip_ws();
    if (at_end()) fail(BracketError::Kind::UnbalancedParens, "missing ')'");
    if (peek() != ')') fail(BracketError::Kind::NonBinaryNode, "expected ')'");
    ++pos_;
  }

  Label parse_label() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail(BracketError::Kind::UnexpectedCharacter, "expected a numeric label id");
    const std::string digits(text_.substr(start, pos_ - start));
    const auto label = digits.size() > 3 ? std::nullopt : label_from_id(std::stoi(digits));
    if (!label) {
      pos_ = start;
      fail(BracketError::Kind::UnknownLabelId, digits);
    }
    return *label;
  }

  ParseTree parse_tree() {
    if (at_end()) fail(BracketError::Kind::UnbalancedParens, "missing '('");
    if (peek() != '(') fail(BracketError::Kind::UnexpectedCharacter, "expected '('");
    const std::size_t open = pos_;
    ++pos_;
    skip_ws();
    const Label label = parse_label();
    skip_ws();
    if (at_end()) fail(BracketError::Kind::UnbalancedParens, "missing ')'");

    if (peek() == ')') {
      fail(BracketError::Kind::EmptyLeaf, "leaf without a token");
    }
    if (peek() != '(') {
      const std::size_t start = pos_;
      while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '(' && peek() != ')')
        ++pos_;
      std::string word = unescape_token(text_.substr(start, pos_ - start));
      if (word.empty()) fail(BracketError::Kind::EmptyLeaf, "leaf without a token");
      expect_close();
      return ParseTree::leaf(label, std::move(word));
    }

    std::vector<ParseTree> children;
    while (true) {
      skip_ws();
      if (at_end()) {
        pos_ = open;
        fail(BracketError::Kind::UnbalancedParens, "node is never closed");
      }
      if (peek() == ')') break;
      if (peek() != '(') fail(BracketError::Kind::NonBinaryNode, "token mixed with child nodes");
      children.push_back(parse_tree());
    }
    if (children.size() != 2) {
      pos_ = open;
      fail(BracketError::Kind::NonBinaryNode, std::to_string(children.size()) + " children");
    }
    ++pos_;
    return ParseTree::node(label, std::move(children[0]), std::move(children[1]));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void serialize_into(const ParseTree& t, std::string& out) {
  out.push_back('(');
  out += std::to_string(label_id(t.label()));
  out.push_back(' ');
  if (t.is_leaf()) {
    out += escape_token(t.word());
  } else {
    serialize_into(t.left(), out);
    out.push_back(' ');
    serialize_into(t.right(), out);
  }
  out.push_back(')');
}

}  // namespace

BracketError::BracketError(Kind kind, std::size_t position, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + " at offset " + std::to_string(position) + ": " + detail),
      kind_(kind),
      position_(position) {}

ParseTree parse_bracketed(std::string_view text) { return BracketParser(text).parse(); }

std::string serialize_bracketed(const ParseTree& tree) {
  std::string out;
  serialize_into(tree, out);
  return out;
}

TreebankError::TreebankError(int line, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " + detail), line_(line) {}

std::vector<ParseTree> read_treebank(std::istream& in) {
  std::vector<ParseTree> trees;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      trees.push_back(parse_bracketed(line));
    } catch (const BracketError& e) {
      throw TreebankError(number, e.what());
    }
  }
  return trees;
}

std::vector<ParseTree> read_treebank_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open treebank " + path);
  return read_treebank(in);
}

void write_treebank(std::ostream& out, const std::vector<ParseTree>& trees) {
  for (const auto& t : trees) out << serialize_bracketed(t) << '\n';
}

}  // namespace causality
