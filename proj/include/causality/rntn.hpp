#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "causality/embeddings.hpp"
#include "causality/label.hpp"
#include "causality/parse_tree.hpp"

namespace causality {

// p = tanh(x' V[k] x + (W x)[k]) for x = [left; right], labels = softmax(C p).
struct RntnParams {
  int d = 0;
  Eigen::MatrixXd V;  // 2d x 2d*d, slice k in columns [2d*k, 2d*(k+1))
  Eigen::MatrixXd W;  // d x 2d
  Eigen::MatrixXd C;  // L x d
  EmbeddingTable embeddings;

  int labels() const { return static_cast<int>(C.rows()); }
  auto slice(int k) const { return V.middleCols(2 * d * k, 2 * d); }
  auto slice(int k) { return V.middleCols(2 * d * k, 2 * d); }
};

RntnParams zero_params(EmbeddingTable embeddings, int labels = kLabelCount);
// W ~ U(+-1/sqrt(2d)) + [I I]/2, V ~ U(+-1/(4d)), C ~ U(+-sqrt(6/(L+d))).
RntnParams init_params(EmbeddingTable embeddings, std::uint64_t seed, int labels = kLabelCount);

Eigen::VectorXd activation(const Eigen::VectorXd& z);
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);
Eigen::VectorXd compose(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj, const RntnParams& params);
Eigen::VectorXd classify(const Eigen::VectorXd& p, const RntnParams& params);

// Embedding row of every leaf. POS tables look words up with their tag
// (fallback tagger when `tags` is empty).
std::vector<int> leaf_rows(const std::vector<std::string>& words, const EmbeddingTable& table,
                           const std::vector<PosTag>& tags = {});

// Tensor slices rearranged for batched products; rebuild after every update.
class Composer {
 public:
  explicit Composer(const RntnParams& params);

  // Columns of X are [left; right] child pairs; returns the parent vectors.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const;

  const RntnParams& params() const { return *params_; }
  const Eigen::MatrixXd& stacked() const { return stacked_; }
  const Eigen::MatrixXd& symmetric() const { return symmetric_; }

 private:
  const RntnParams* params_;
  Eigen::MatrixXd stacked_;    // 2d*d x 2d, row block k = V[k]
  Eigen::MatrixXd symmetric_;  // 2d x 2d*d, column block k = V[k] + V[k]'
};

struct NodeState {
  Eigen::VectorXd vector;
  Eigen::VectorXd label_probs;
  int begin = 0;
  int end = 0;
};

// Post-order states, aligned with flatten(tree).
struct GoldForward {
  std::vector<FlatNode> nodes;
  std::vector<NodeState> states;
  std::vector<int> rows;
  double loss = 0.0;
  int correct = 0;
};

GoldForward forward_gold(const ParseTree& tree, const RntnParams& params, const std::vector<PosTag>& tags = {});

struct Gradients {
  Eigen::MatrixXd V, W, C, E;  // E matches embeddings.vectors; zero when the table is frozen

  static Gradients zeros_like(const RntnParams& params);
  void set_zero();
  Gradients& operator*=(double s);
};

Gradients backward(const ParseTree& tree, const GoldForward& fwd, const RntnParams& params);

// A gold tree with its leaf rows resolved once.
struct Example {
  ParseTree tree;
  std::vector<int> rows;
};

std::vector<Example> make_examples(const std::vector<ParseTree>& trees, const EmbeddingTable& table,
                                   const std::vector<std::vector<PosTag>>& tags = {});

struct BatchStats {
  double loss = 0.0;
  int correct = 0;
  int nodes = 0;
};

// Forward (and backward when `grads` is non-null) over a batch of gold
// trees, grouping nodes of equal height across trees into single products.
BatchStats run_batch(const std::vector<const Example*>& batch, const Composer& composer, Gradients* grads);

enum class ScoreMode : std::uint8_t {
  MaxProbability,  // highest label probability of the merged pair
  SegmentMass,     // probability mass outside Word/Punct/Symbol
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ParseTree greedy_parse(const std::vector<std::string>& words, const RntnParams& params,
                       ScoreMode mode = ScoreMode::MaxProbability, const std::vector<PosTag>& tags = {});
ParseTree greedy_parse(const std::vector<std::string>& words, const std::vector<int>& rows, const Composer& composer,
                       ScoreMode mode = ScoreMode::MaxProbability);

struct AdaGradState {
  Gradients acc;

  static AdaGradState zeros_like(const RntnParams& params);
};

void adagrad_step(RntnParams& params, const Gradients& grads, AdaGradState& state, double lr, double eps);

struct CheckpointMeta {
  double lr = 0.0;
  double eps = 0.0;
  int mini_batch = 0;
  int epochs = 0;
  std::uint64_t seed = 0;
  int epoch = 0;
  double val_accuracy = 0.0;
  std::string config;  // free-form resolved configuration

  bool operator==(const CheckpointMeta&) const = default;
};

struct Checkpoint {
  RntnParams params;
  AdaGradState state;
  CheckpointMeta meta;
};

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { VersionMismatch, CorruptChecksum, Io };
  CheckpointError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::string& bytes);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace causality
