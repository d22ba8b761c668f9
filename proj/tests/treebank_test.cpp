#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "causality/label.hpp"
#include "causality/parse_tree.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace causality;

namespace {

std::string squeeze(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

}  // namespace

TEST_CASE("label ids read off the published trees are fixed") {
  CHECK(label_id(Label::RootSentence) == 1);
  CHECK(label_id(Label::Symbol) == 2);
  CHECK(label_id(Label::Punct) == 3);
  CHECK(label_id(Label::And) == 4);
  CHECK(label_id(Label::KeyC) == 6);
  CHECK(label_id(Label::Condition) == 8);
  CHECK(label_id(Label::Variable) == 9);
  CHECK(label_id(Label::Statement) == 10);
  CHECK(label_id(Label::Cause) == 11);
  CHECK(label_id(Label::Effect) == 12);
  CHECK(label_id(Label::CauseEffectRelation) == 13);
  CHECK(label_id(Label::SeparatedCause) == 14);
  CHECK(label_id(Label::Negation) == 16);
  CHECK(label_id(Label::NonCausal) == 17);
  CHECK(label_id(Label::Sentence) == 20);
  CHECK(label_id(Label::Word) == 23);
}

TEST_CASE("label table has 27 distinct labels, 12 of them automatic") {
  std::set<int> ids;
  std::set<std::string_view> names;
  int automatic = 0;
  for (const auto& info : label_table()) {
    ids.insert(label_id(info.label));
    names.insert(info.name);
    automatic += info.automatic;
    CHECK(label_from_name(info.name) == info.label);
  }
  CHECK(ids.size() == 27);
  CHECK(names.size() == 27);
  CHECK(*ids.begin() == 1);
  CHECK(*ids.rbegin() == 27);
  CHECK(automatic == 12);
}

TEST_CASE("published label table matches the compiled table") {
  std::ifstream in(std::string(CAUSALITY_TEST_DATA) + "/../../data/labels.tsv");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    int id;
    std::string name, kind;
    ss >> id >> name >> kind;
    REQUIRE(label_from_id(id));
    CHECK(label_name(*label_from_id(id)) == name);
    CHECK(is_automatic(*label_from_id(id)) == (kind == "automatic"));
    ++rows;
  }
  CHECK(rows == kLabelCount);
}

TEST_CASE("label names accept common spellings") {
  CHECK(label_from_name("KeyC") == Label::KeyC);
  CHECK(label_from_name("Key_NC") == Label::KeyNC);
  CHECK(label_from_name("NonCausal") == Label::NonCausal);
  CHECK(label_from_name("Cause-Effect-Relation") == Label::CauseEffectRelation);
  CHECK(label_from_name("SeperatedCause") == Label::SeparatedCause);
  CHECK_FALSE(label_from_name("Because"));
  CHECK_FALSE(label_from_id(0));
  CHECK_FALSE(label_from_id(28));
}

TEST_CASE("parse_bracketed on the condition example") {
  const auto t = parse_bracketed("(8 (8 (8 (23 is) (23 always)) (23 1280)) (23 bits))");
  CHECK(t.label() == Label::Condition);
  CHECK(t.leaf_count() == 4);
  CHECK(flatten(t).size() == 7);
  CHECK(t.words() == std::vector<std::string>{"is", "always", "1280", "bits"});
  CHECK(t.left().label() == Label::Condition);
  CHECK(t.right().word() == "bits");
}

TEST_CASE("single leaf") {
  const auto t = parse_bracketed("(23 hello)");
  CHECK(t.is_leaf());
  CHECK(t.label() == Label::Word);
  CHECK(t.word() == "hello");
  CHECK(serialize_bracketed(t) == "(23 hello)");
  CHECK(ngram_length(t) == 1);
}

TEST_CASE("Table 2 trees") {
  // S1 has 16 tokens: The Gateway shall provide a minimum of 32kW for Gateway
  // use when SEP is inactive .
  const auto s1 = parse_bracketed(fixtures::kTable2[0]);
  CHECK(s1.leaf_count() == 16);
  CHECK(flatten(s1).size() == 31);
  CHECK(s1.label() == Label::RootSentence);

  // S2: For example , when E=16 and I=5 , then the length occupied by the
  // check symbols is always 1280 bits .
  const auto s2 = parse_bracketed(fixtures::kTable2[1]);
  CHECK(ngram_length(s2) == 21);

  for (auto text : fixtures::kTable2) {
    const auto t = parse_bracketed(text);
    CHECK(validate_schema(t).empty());
    CHECK(squeeze(serialize_bracketed(t)) == squeeze(text));
    CHECK(parse_bracketed(serialize_bracketed(t)) == t);
  }
}

TEST_CASE("serialize format") {
  const auto t = ParseTree::node(Label::Condition, ParseTree::leaf(Label::Word, "is"), ParseTree::leaf(Label::Word, "true"));
  CHECK(serialize_bracketed(t) == "(8 (23 is) (23 true))");
  CHECK(ngram_length(t) == 2);
  CHECK(serialize_bracketed(ParseTree::leaf(Label::Word, "x")) == "(23 x)");
  CHECK(serialize_bracketed(parse_bracketed("  ( 8\t(23 is)(23   true) )  ")) == "(8 (23 is) (23 true))");
}

TEST_CASE("parentheses inside tokens survive the round trip") {
  const auto t = ParseTree::node(Label::Insertion, ParseTree::leaf(Label::Symbol, "("), ParseTree::leaf(Label::Word, "x(1)"));
  const auto s = serialize_bracketed(t);
  CHECK(s == "(15 (2 -LRB-) (23 x-LRB-1-RRB-))");
  CHECK(parse_bracketed(s) == t);
}

TEST_CASE("bracketed parse errors") {
  auto kind_of = [](std::string_view s) {
    try {
      parse_bracketed(s);
    } catch (const BracketError& e) {
      return e.kind();
    }
    FAIL("no error for " << s);
    return BracketError::Kind::UnexpectedCharacter;
  };
  CHECK(kind_of("(8 (23 is) (23 true)") == BracketError::Kind::UnbalancedParens);
  CHECK(kind_of("(8 (23 is) (23 true)))") == BracketError::Kind::UnbalancedParens);
  CHECK(kind_of("(99 x)") == BracketError::Kind::UnknownLabelId);
  CHECK(kind_of("(0 x)") == BracketError::Kind::UnknownLabelId);
  CHECK(kind_of("(8 (23 a) (23 b) (23 c))") == BracketError::Kind::NonBinaryNode);
  CHECK(kind_of("(8 (23 a))") == BracketError::Kind::NonBinaryNode);
  CHECK(kind_of("(23 a b)") == BracketError::Kind::NonBinaryNode);
  CHECK(kind_of("(23 )") == BracketError::Kind::EmptyLeaf);
  CHECK(kind_of("(x a)") == BracketError::Kind::UnexpectedCharacter);
  CHECK(kind_of("") == BracketError::Kind::UnbalancedParens);
}

TEST_CASE("validate_schema rules") {
  using K = SchemaViolation::Kind;
  const auto cause_leaf = ParseTree::node(Label::RootSentence, ParseTree::leaf(Label::Cause, "x"), ParseTree::leaf(Label::Punct, "."));
  const auto v = validate_schema(cause_leaf);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == K::LeafWithInternalLabel);
  CHECK(v[0].label == Label::Cause);

  const auto stmt_root = parse_bracketed("(10 (9 A) (8 (23 is) (23 true)))");
  const auto w = validate_schema(stmt_root);
  REQUIRE(w.size() == 1);
  CHECK(w[0].kind == K::RootNotRootSentence);

  const auto nested = parse_bracketed("(1 (1 (9 A) (8 x)) (3 .))");
  REQUIRE(validate_schema(nested).size() == 1);
  CHECK(validate_schema(nested)[0].kind == K::NestedRootSentence);

  const auto word_inside = parse_bracketed("(1 (23 (9 A) (8 x)) (3 .))");
  REQUIRE(validate_schema(word_inside).size() == 1);
  CHECK(validate_schema(word_inside)[0].kind == K::InternalWithLeafLabel);
}

TEST_CASE("flatten spans") {
  const auto nodes = flatten(parse_bracketed(fixtures::kTable2[0]));
  CHECK(nodes.back().begin == 0);
  CHECK(nodes.back().end == 16);
  for (const auto& n : nodes) {
    if (n.is_leaf()) {
      CHECK(n.span_length() == 1);
    } else {
      CHECK(nodes[n.left].begin == n.begin);
      CHECK(nodes[n.left].end == nodes[n.right].begin);
      CHECK(nodes[n.right].end == n.end);
    }
  }
}

TEST_CASE("property: node count, leaf order, round trip over random trees") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 40)(rng);
    const auto t = gen::random_tree(rng, n);
    const auto nodes = flatten(t);
    REQUIRE(static_cast<int>(nodes.size()) == 2 * n - 1);
    REQUIRE(t.leaf_count() == n);
    const auto toks = t.tokens();
    for (int k = 0; k < n; ++k) REQUIRE(toks[k].index == k);
    const auto s = serialize_bracketed(t);
    REQUIRE(parse_bracketed(s) == t);
    REQUIRE(serialize_bracketed(parse_bracketed(s)) == s);
  }
}

TEST_CASE("treebank reader reports the failing line") {
  std::istringstream in("(23 a)\n\n(8 (23 a) (23 b))\n(8 (23 a)\n");
  try {
    read_treebank(in);
    FAIL("expected an error");
  } catch (const TreebankError& e) {
    CHECK(e.line() == 4);
  }
  std::istringstream ok("(23 a)\n\n(8 (23 a) (23 b))\n");
  CHECK(read_treebank(ok).size() == 2);
}

TEST_CASE("tokenizer detaches punctuation") {
  auto texts = [](std::string_view s) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(s)) out.push_back(t.text);
    return out;
  };
  CHECK(texts("If A is true, then C shall occur.") ==
        std::vector<std::string>{"If", "A", "is", "true", ",", "then", "C", "shall", "occur", "."});
  CHECK(texts("For plated through holes only: When I=5, E=16.") ==
        std::vector<std::string>{"For", "plated", "through", "holes", "only", ":", "When", "I=5", ",", "E=16", "."});
  CHECK(texts("a lead-through (if any).") == std::vector<std::string>{"a", "lead-through", "(", "if", "any", ")", "."});
  const auto spans = tokenize("A is true.");
  CHECK(spans[2].begin == 5);
  CHECK(spans[2].end == 9);
  CHECK(spans[3].begin == 9);
}

TEST_CASE("leaf labels by token") {
  CHECK(leaf_label_for("word") == Label::Word);
  CHECK(leaf_label_for("E=16") == Label::Word);
  CHECK(leaf_label_for(",") == Label::Punct);
  CHECK(leaf_label_for(".") == Label::Punct);
  CHECK(leaf_label_for(":") == Label::Symbol);
  CHECK(leaf_label_for("%") == Label::Symbol);
}
