#include <algorithm>
#include <cctype>

#include "causality/parse_tree.hpp"

namespace causality {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_trailing_punct(char c) {
  return c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?' || c == ')' || c == '"';
}

bool is_leading_punct(char c) { return c == '(' || c == '"'; }

}  // namespace

std::vector<TokenSpan> tokenize(std::string_view s) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size()) break;
    std::size_t b = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    std::size_t e = i;

    while (e - b > 1 && is_leading_punct(s[b])) {
      out.push_back({std::string(1, s[b]), b, b + 1});
      ++b;
    }
    std::vector<TokenSpan> tail;
    while (e - b > 1 && is_trailing_punct(s[e - 1])) {
      tail.push_back({std::string(1, s[e - 1]), e - 1, e});
      --e;
    }
    out.push_back({std::string(s.substr(b, e - b)), b, e});
    std::reverse(tail.begin(), tail.end());
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

std::vector<Token> tokenize_words(std::string_view sentence) {
  std::vector<Token> out;
  int i = 0;
  for (auto& t : tokenize(sentence)) out.push_back(Token{std::move(t.text), i++});
  return out;
}

Label leaf_label_for(std::string_view token) {
  if (token == "." || token == "," || token == ";" || token == "!" || token == "?") return Label::Punct;
  const bool has_word_char = std::any_of(token.begin(), token.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u);
  });
  return has_word_char ? Label::Word : Label::Symbol;
}

bool is_separator(std::string_view token) { return token == "," || token == ":" || token == ";"; }

bool is_final_punct(std::string_view token) { return token == "." || token == "!" || token == "?"; }

}  // namespace causality
