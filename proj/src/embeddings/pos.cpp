#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "causality/embeddings.hpp"

namespace causality {

namespace {

constexpr std::string_view kNames[kPosTagCount] = {"ADJ",  "ADP",   "ADV",   "AUX",   "CCONJ", "DET",
                                                   "INTJ", "NOUN",  "NUM",   "PART",  "PRON",  "PROPN",
                                                   "PUNCT", "SCONJ", "SYM",  "VERB",  "X"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::unordered_map<std::string, PosTag>& lexicon() {
  using P = PosTag;
  static const std::unordered_map<std::string, PosTag> lex = [] {
    std::unordered_map<std::string, PosTag> m;
    auto put = [&](P tag, std::initializer_list<const char*> words) {
      for (const char* w : words) m.emplace(w, tag);
    };
    put(P::DET, {"the", "a", "an", "this", "that", "these", "those", "each", "every", "any", "all", "no", "some",
                 "both", "either", "neither", "another", "such"});
    put(P::ADP, {"of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "during", "after",
                 "before", "within", "without", "between", "through", "over", "under", "about", "via", "per",
                 "upon", "than", "across", "against", "among", "towards", "toward"});
    put(P::SCONJ, {"if", "when", "whenever", "while", "unless", "because", "since", "as", "once", "until",
                   "whether", "although", "though", "where", "wherever"});
    put(P::CCONJ, {"and", "or", "but", "nor", "yet", "and/or"});
    put(P::AUX, {"shall", "should", "must", "may", "might", "can", "could", "will", "would", "is", "are", "was",
                 "were", "be", "been", "being", "am", "has", "have", "had", "do", "does", "did"});
    put(P::PRON, {"it", "its", "they", "them", "their", "he", "she", "we", "us", "our", "you", "your", "i", "me",
                  "my", "his", "her", "which", "who", "whom", "whose", "what", "itself", "themselves"});
    put(P::PART, {"not", "n't", "'s"});
    put(P::ADV, {"then", "also", "only", "always", "never", "otherwise", "immediately", "again", "already",
                 "automatically", "there", "here", "else", "still", "however", "therefore", "thus", "very", "more",
                 "less", "most", "least", "just", "even", "so", "too", "further"});
    put(P::NUM, {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "zero",
                 "hundred", "thousand"});
    put(P::INTJ, {"yes", "oh"});
    return m;
  }();
  return lex;
}

bool all_digits(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%') {
      return false;
    }
  }
  return digit;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

PosTag tag_word(std::string_view word, bool sentence_initial) {
  if (word.empty()) return PosTag::X;
  if (std::none_of(word.begin(), word.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); }))
    return leaf_label_for(word) == Label::Punct ? PosTag::PUNCT : PosTag::SYM;
  if (all_digits(word)) return PosTag::NUM;
  if (!sentence_initial && std::isupper(static_cast<unsigned char>(word.front())) && word != "I") return PosTag::PROPN;
  const std::string w = lower(word);
  const auto& lex = lexicon();
  if (auto it = lex.find(w); it != lex.end()) return it->second;
  if (ends_with(w, "ly")) return PosTag::ADV;
  for (auto s : {"able", "ible", "al", "ive", "ous", "ful", "less", "ic", "ary", "ent", "ant"})
    if (ends_with(w, s)) return PosTag::ADJ;
  for (auto s : {"ing", "ed", "ize", "ise", "ate", "ify"})
    if (ends_with(w, s)) return PosTag::VERB;
  return PosTag::NOUN;
}

}  // namespace

std::string_view pos_name(PosTag tag) { return kNames[static_cast<int>(tag)]; }

std::optional<PosTag> pos_from_name(std::string_view name) {
  for (int i = 0; i < kPosTagCount; ++i)
    if (kNames[i] == name) return static_cast<PosTag>(i);
  if (name == "CONJ") return PosTag::CCONJ;
  if (name == "PRT") return PosTag::PART;
  if (name == ".") return PosTag::PUNCT;
  return std::nullopt;
}

Eigen::VectorXd pos_one_hot(PosTag tag, int dims) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dims);
  const int i = static_cast<int>(tag);
  if (i < dims) v[i] = 1.0;
  return v;
}

std::vector<PosTag> tag_pos(const std::vector<std::string>& words) {
  if (words.empty()) throw EmbeddingError(EmbeddingError::Kind::EmptyInput, "no tokens to tag");
  std::vector<PosTag> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) out.push_back(tag_word(words[i], i == 0));
  return out;
}

std::vector<PosTag> tag_pos(const std::vector<Token>& tokens) {
  std::vector<std::string> words;
  for (const auto& t : tokens) words.push_back(t.text);
  return tag_pos(words);
}

std::vector<std::pair<std::string, PosTag>> read_pos_sidecar(std::istream& in) {
  std::vector<std::pair<std::string, PosTag>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0)
      throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch, "line " + std::to_string(line_no) + ": no tab");
    const auto tag = pos_from_name(std::string_view(line).substr(tab + 1));
    if (!tag)
      throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch,
                           "line " + std::to_string(line_no) + ": unknown tag '" + line.substr(tab + 1) + "'");
    out.emplace_back(line.substr(0, tab), *tag);
  }
  return out;
}

std::vector<std::vector<PosTag>> align_sidecar(const std::vector<ParseTree>& trees,
                                               const std::vector<std::pair<std::string, PosTag>>& entries) {
  std::vector<std::vector<PosTag>> out;
  std::size_t k = 0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    std::vector<PosTag> tags;
    for (const auto& w : trees[t].words()) {
      if (k >= entries.size())
        throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch, "sidecar ends inside sentence " +
                                                                        std::to_string(t + 1));
      if (entries[k].first != w)
        throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch,
                             "sentence " + std::to_string(t + 1) + ": expected '" + w + "', sidecar has '" +
                                 entries[k].first + "'");
      tags.push_back(entries[k++].second);
    }
    out.push_back(std::move(tags));
  }
  if (k != entries.size())
    throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch,
                         std::to_string(entries.size() - k) + " sidecar entries left over");
  return out;
}

}  // namespace causality
