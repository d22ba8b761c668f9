#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causality/parse_tree.hpp"

namespace causality {

class Vocab {
 public:
  static constexpr std::string_view kUnk = "<unk>";

  Vocab();
  explicit Vocab(const std::vector<std::string>& words);

  // Returns the index of `word`, adding it if new.
  int add(std::string_view word);
  // Index of `word`, or unk() if absent.
  int index(std::string_view word) const;
  std::optional<int> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }
  const std::string& word(int i) const { return words_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& words() const { return words_; }
  int size() const { return static_cast<int>(words_.size()); }
  int unk() const { return 0; }

  bool operator==(const Vocab& o) const { return words_ == o.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Every leaf word of every tree, in first-seen order.
Vocab vocab_from_trees(const std::vector<ParseTree>& trees);

enum class EmbeddingKind : std::uint8_t { Random = 0, Pos = 1 };

struct PosWeighting {
  int pos_dims = 30;
  int pretrained_dims = 30;

  int dim() const { return pos_dims + pretrained_dims; }
  bool operator==(const PosWeighting&) const = default;
};

// Splits of a d-dimensional vector by POS share (50, 75 or 100 percent).
PosWeighting pos_weighting(int d, int pos_percent);

// One vector per vocabulary entry, stored as the columns of `vectors` (d x |V|).
struct EmbeddingTable {
  Vocab vocab;
  Eigen::MatrixXd vectors;
  bool trainable = true;
  EmbeddingKind kind = EmbeddingKind::Random;
  PosWeighting weighting{};

  int dim() const { return static_cast<int>(vectors.rows()); }
  auto row(int i) const { return vectors.col(i); }
  auto row(int i) { return vectors.col(i); }

  // Random tables: the word itself or <unk>. POS tables: "word/TAG",
  // then "<unk>/TAG", then "<unk>".
  int lookup(std::string_view word, std::string_view tag = {}) const;
};

EmbeddingTable init_random(const Vocab& vocab, int d, double r, std::uint64_t seed);

class EmbeddingError : public std::runtime_error {
 public:
  enum class Kind { DimMismatch, MalformedVector, ShortInput, EmptyInput, SidecarMismatch };
  EmbeddingError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct PretrainedLoad {
  EmbeddingTable table;
  std::vector<std::string> missing;  // vocabulary words absent from the file
};

// Text vectors, one `word v1 ... v_dims` per line. A fastText-style
// "count dims" header line is skipped. Missing words get zero rows.
PretrainedLoad load_pretrained(std::istream& in, const Vocab& vocab, int dims);
PretrainedLoad load_pretrained(const std::filesystem::path& path, const Vocab& vocab, int dims);

Eigen::VectorXd pos_concat(const Eigen::VectorXd& word_vec, const Eigen::VectorXd& pos_vec, const PosWeighting& w);

// --- POS tags --------------------------------------------------------------

enum class PosTag : std::uint8_t {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};
inline constexpr int kPosTagCount = 17;

std::string_view pos_name(PosTag tag);
// Universal tag names, plus the short universal aliases (CONJ, PRT, ".").
std::optional<PosTag> pos_from_name(std::string_view name);
// One-hot over the tagset, padded with zeros or truncated to `dims`.
Eigen::VectorXd pos_one_hot(PosTag tag, int dims);

// Lexicon plus suffix rules; unknown words become NOUN.
std::vector<PosTag> tag_pos(const std::vector<Token>& tokens);
std::vector<PosTag> tag_pos(const std::vector<std::string>& words);

// `token<TAB>TAG` lines; blank lines are ignored.
std::vector<std::pair<std::string, PosTag>> read_pos_sidecar(std::istream& in);
// Distributes sidecar entries over the trees' leaves in corpus order.
std::vector<std::vector<PosTag>> align_sidecar(const std::vector<ParseTree>& trees,
                                               const std::vector<std::pair<std::string, PosTag>>& entries);

std::string pos_key(std::string_view word, PosTag tag);

// Frozen table keyed by "word/TAG" for every (word, tag) pair seen, plus one
// "<unk>/TAG" row per tag and a zero "<unk>" row. `pretrained` may be null
// when the weighting has no pretrained share.
EmbeddingTable build_pos_table(const std::vector<std::vector<std::string>>& sentences,
                               const std::vector<std::vector<PosTag>>& tags, const PosWeighting& weighting,
                               const EmbeddingTable* pretrained);

}  // namespace causality
