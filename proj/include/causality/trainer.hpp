#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "causality/brat.hpp"
#include "causality/rntn.hpp"

namespace causality {

// --- splitting ---------------------------------------------------------------

struct SplitSpec {
  double train_frac = 1290.0 / 1571.0;
  double val_frac = 140.0 / 1571.0;
  double test_frac = 141.0 / 1571.0;
  bool stratify_by_label = true;
  std::uint64_t seed = 1;
};

struct SplitIndices {
  std::vector<int> train, val, test;
  // Largest gap between a label's share of segments in one split and its
  // share in the whole corpus.
  double tolerance = 0.0;
};

struct Split {
  std::vector<ParseTree> train, val, test;
  double tolerance = 0.0;
};

class SplitError : public std::runtime_error {
 public:
  enum class Kind { TooFewSentences, BadFractions };
  SplitError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Sizes: round(n * train_frac), round(n * val_frac), remainder.
std::array<int, 3> split_sizes(int n, const SplitSpec& spec);
SplitIndices split_indices(const std::vector<ParseTree>& trees, const SplitSpec& spec);
Split split_dataset(const std::vector<ParseTree>& trees, const SplitSpec& spec);
// k disjoint folds covering 0..n-1.
std::vector<std::vector<int>> kfold_indices(int n, int k, std::uint64_t seed);

// --- training ----------------------------------------------------------------

enum class EmbeddingMode { Random, Pos50, Pos75, Pos100 };

std::string to_string(EmbeddingMode mode);
std::optional<EmbeddingMode> embedding_mode_from_string(std::string_view s);
int pos_percent(EmbeddingMode mode);

struct TrainConfig {
  double lr = 0.001;
  int mini_batch = 24;
  int wvec_dim = 60;
  int epochs = 90;
  double eps = 1e-8;
  std::uint64_t seed = 1;
  double init_range = 1e-4;
  EmbeddingMode embedding = EmbeddingMode::Random;
  CorpusBranching branching_data = CorpusBranching::Left;
  bool grid_mode = false;  // restrict lr, mb and dim to the tuning grid
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const TrainConfig& cfg);
// "lr=0.001 mb=24 dim=60 epochs=90 eps=1e-08 seed=1 embedding=random branching=left"
std::string describe(const TrainConfig& cfg);

struct Corpus {
  std::vector<ParseTree> trees;
  std::vector<std::vector<PosTag>> tags;  // optional, one sequence per tree
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // mean per sentence
  double train_acc = 0.0;   // gold-structure node accuracy
  double val_acc = 0.0;
};

std::string format_epoch(const EpochLog& e);

struct TrainResult {
  Checkpoint best;
  std::vector<EpochLog> log;
  std::string log_text;
};

class TrainError : public std::runtime_error {
 public:
  TrainError(int epoch, const std::string& detail);
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// Builds the embedding table for `cfg` from the training corpus (random mode)
// or from every sentence given (POS modes).
EmbeddingTable make_embeddings(const TrainConfig& cfg, const std::vector<const Corpus*>& corpora,
                               const EmbeddingTable* pretrained = nullptr);

TrainResult train(const Corpus& train_set, const Corpus& val_set, const TrainConfig& cfg,
                  std::optional<EmbeddingTable> embeddings = std::nullopt,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

struct GoldAccuracy {
  double loss = 0.0;
  int correct = 0;
  int nodes = 0;
  double accuracy() const { return nodes ? static_cast<double>(correct) / nodes : 0.0; }
};

// Node accuracy with the gold structure imposed (no parsing).
GoldAccuracy gold_structure_accuracy(const Corpus& corpus, const RntnParams& params);

// --- evaluation --------------------------------------------------------------

double f1_score(double precision, double recall, double beta = 1.0);

struct LabelScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  int support = 0;    // gold nodes
  int predicted = 0;  // predicted nodes
  int matched = 0;
};

struct EvalReport {
  int sentences = 0;
  int nodes = 0;
  int correct = 0;
  double node_accuracy = 0.0;
  std::array<LabelScore, kLabelCount> per_label{};
  double mean_recall = 0.0;
  double mean_precision = 0.0;
  double mean_f1 = 0.0;
  std::map<int, double> cumulative_accuracy_by_ngram;
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { LabelSetMismatch, TokenMismatch, NoOverlap, TooFewRaters };
  EvalError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A predicted node is correct when the gold tree has a node with the same
// span and label.
EvalReport evaluate_predictions(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& predicted);
EvalReport evaluate(const RntnParams& model, const Corpus& test, ScoreMode mode = ScoreMode::MaxProbability);
std::map<int, double> cumulative_ngram_accuracy(const std::vector<ParseTree>& gold,
                                                const std::vector<ParseTree>& predicted);
std::map<int, double> cumulative_ngram_accuracy(const RntnParams& model, const Corpus& test,
                                                ScoreMode mode = ScoreMode::MaxProbability);
std::vector<ParseTree> predict_all(const RntnParams& model, const Corpus& corpus,
                                   ScoreMode mode = ScoreMode::MaxProbability);

// Labels as columns, Recall/Precision/F1 as rows, "-" for labels without support.
std::string format_report(const EvalReport& report);
std::string report_json(const EvalReport& report);

// --- agreement and statistics ------------------------------------------------

struct AgreementReport {
  std::vector<std::string> raters;
  std::vector<std::vector<double>> pairwise_f1;  // [gold][subject]
  double average_f1 = 0.0;
  std::array<std::optional<double>, kLabelCount> per_label_f1{};
};

AgreementReport inter_annotator_agreement(const std::map<std::string, std::vector<NamedDoc>>& docs_by_rater);
std::string format_agreement(const AgreementReport& report);

struct TreebankStats {
  int sentences = 0;
  long long segments = 0;
  std::array<long long, kLabelCount> counts{};
  bool root_count_matches = true;  // RootSentence count == sentences
};

TreebankStats treebank_stats(const std::vector<ParseTree>& trees);
std::string format_stats(const std::vector<std::pair<std::string, TreebankStats>>& columns);

}  // namespace causality
