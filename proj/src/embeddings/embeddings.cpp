#include "causality/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace causality {

Vocab::Vocab() { add(kUnk); }

Vocab::Vocab(const std::vector<std::string>& words) : Vocab() {
  for (const auto& w : words) add(w);
}

int Vocab::add(std::string_view word) {
  if (auto i = find(word)) return *i;
  const int i = size();
  words_.emplace_back(word);
  index_.emplace(words_.back(), i);
  return i;
}

std::optional<int> Vocab::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocab::index(std::string_view word) const { return find(word).value_or(unk()); }

Vocab vocab_from_trees(const std::vector<ParseTree>& trees) {
  Vocab v;
  for (const auto& t : trees)
    for (const auto& w : t.words()) v.add(w);
  return v;
}

PosWeighting pos_weighting(int d, int pos_percent) {
  const int pos = d * pos_percent / 100;
  return {pos, d - pos};
}

int EmbeddingTable::lookup(std::string_view word, std::string_view tag) const {
  if (kind == EmbeddingKind::Random || tag.empty()) return vocab.index(word);
  const std::string t(tag);
  if (auto i = vocab.find(std::string(word) + "/" + t)) return *i;
  if (auto i = vocab.find(std::string(Vocab::kUnk) + "/" + t)) return *i;
  return vocab.unk();
}

EmbeddingTable init_random(const Vocab& vocab, int d, double r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  EmbeddingTable t;
  t.vocab = vocab;
  t.vectors.resize(d, vocab.size());
  for (Eigen::Index j = 0; j < t.vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      double x;
      do x = u(rng);
      while (x == -r);
      t.vectors(i, j) = x;
    }
  }
  t.trainable = true;
  t.kind = EmbeddingKind::Random;
  t.weighting = {0, d};
  return t;
}

namespace {

const char* kind_name(EmbeddingError::Kind k) {
  switch (k) {
    case EmbeddingError::Kind::DimMismatch: return "DimMismatch";
    case EmbeddingError::Kind::MalformedVector: return "MalformedVector";
    case EmbeddingError::Kind::ShortInput: return "ShortInput";
    case EmbeddingError::Kind::EmptyInput: return "EmptyInput";
    case EmbeddingError::Kind::SidecarMismatch: return "SidecarMismatch";
  }
  return "?";
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool is_integer(std::string_view s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

}  // namespace

EmbeddingError::EmbeddingError(Kind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

PretrainedLoad load_pretrained(std::istream& in, const Vocab& vocab, int dims) {
  PretrainedLoad out;
  out.table.vocab = vocab;
  out.table.vectors = Eigen::MatrixXd::Zero(dims, vocab.size());
  out.table.trainable = false;
  out.table.kind = EmbeddingKind::Random;
  out.table.weighting = {0, dims};
  std::vector<bool> seen(static_cast<std::size_t>(vocab.size()), false);

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (line_no == 1 && f.size() == 2 && is_integer(f[0]) && is_integer(f[1])) continue;
    const auto idx = vocab.find(f[0]);
    if (static_cast<int>(f.size()) - 1 != dims)
      throw EmbeddingError(EmbeddingError::Kind::DimMismatch,
                           std::string(f[0]) + " has " + std::to_string(f.size() - 1) + " values, expected " +
                               std::to_string(dims));
    Eigen::VectorXd v(dims);
    for (int i = 0; i < dims; ++i) {
      if (!parse_double(f[static_cast<std::size_t>(i) + 1], v[i]))
        throw EmbeddingError(EmbeddingError::Kind::MalformedVector, "line " + std::to_string(line_no));
    }
    if (!idx) continue;
    out.table.vectors.col(*idx) = v;
    seen[static_cast<std::size_t>(*idx)] = true;
  }
  for (int i = 1; i < vocab.size(); ++i)
    if (!seen[static_cast<std::size_t>(i)]) out.missing.push_back(vocab.word(i));
  return out;
}

PretrainedLoad load_pretrained(const std::filesystem::path& path, const Vocab& vocab, int dims) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_pretrained(in, vocab, dims);
}

Eigen::VectorXd pos_concat(const Eigen::VectorXd& word_vec, const Eigen::VectorXd& pos_vec, const PosWeighting& w) {
  if (pos_vec.size() < w.pos_dims)
    throw EmbeddingError(EmbeddingError::Kind::ShortInput, "POS vector shorter than " + std::to_string(w.pos_dims));
  if (word_vec.size() < w.pretrained_dims)
    throw EmbeddingError(EmbeddingError::Kind::ShortInput,
                         "word vector shorter than " + std::to_string(w.pretrained_dims));
  Eigen::VectorXd out(w.dim());
  out.head(w.pos_dims) = pos_vec.head(w.pos_dims);
  out.tail(w.pretrained_dims) = word_vec.head(w.pretrained_dims);
  return out;
}

std::string pos_key(std::string_view word, PosTag tag) {
  return std::string(word) + "/" + std::string(pos_name(tag));
}

EmbeddingTable build_pos_table(const std::vector<std::vector<std::string>>& sentences,
                               const std::vector<std::vector<PosTag>>& tags, const PosWeighting& weighting,
                               const EmbeddingTable* pretrained) {
  if (weighting.pretrained_dims > 0 && pretrained == nullptr)
    throw EmbeddingError(EmbeddingError::Kind::ShortInput, "pretrained vectors required for this weighting");
  if (sentences.size() != tags.size())
    throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch, "one tag sequence per sentence expected");

  Vocab vocab;
  std::vector<std::pair<std::string, PosTag>> entries{{"", PosTag::X}};  // slot 0 is <unk>
  for (int t = 0; t < kPosTagCount; ++t) {
    const auto tag = static_cast<PosTag>(t);
    vocab.add(pos_key(Vocab::kUnk, tag));
    entries.emplace_back("", tag);
  }
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (sentences[s].size() != tags[s].size())
      throw EmbeddingError(EmbeddingError::Kind::SidecarMismatch, "sentence " + std::to_string(s + 1));
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      const int before = vocab.size();
      vocab.add(pos_key(sentences[s][i], tags[s][i]));
      if (vocab.size() > before) entries.emplace_back(sentences[s][i], tags[s][i]);
    }
  }

  EmbeddingTable table;
  table.vocab = vocab;
  table.vectors = Eigen::MatrixXd::Zero(weighting.dim(), vocab.size());
  table.trainable = false;
  table.kind = EmbeddingKind::Pos;
  table.weighting = weighting;
  const Eigen::VectorXd zero_word = Eigen::VectorXd::Zero(weighting.pretrained_dims);
  for (int i = 1; i < vocab.size(); ++i) {
    const auto& [word, tag] = entries[static_cast<std::size_t>(i)];
    Eigen::VectorXd wv = zero_word;
    if (pretrained && !word.empty()) {
      if (pretrained->dim() < weighting.pretrained_dims)
        throw EmbeddingError(EmbeddingError::Kind::ShortInput, "pretrained vectors too short");
      if (auto j = pretrained->vocab.find(word)) wv = pretrained->row(*j).head(weighting.pretrained_dims);
    }
    table.vectors.col(i) = pos_concat(wv, pos_one_hot(tag, weighting.pos_dims), weighting);
  }
  return table;
}

}  // namespace causality
