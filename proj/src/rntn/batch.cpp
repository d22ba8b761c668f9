#include <algorithm>
#include <cmath>

#include "causality/rntn.hpp"

namespace causality {

namespace {

struct GlobalNode {
  int left = -1;  // global ids
  int right = -1;
  int row = -1;  // embedding row for leaves
  int gold = 0;  // label index
};

// All nodes of a batch in one matrix, bucketed by height.
class Engine {
 public:
  Engine(const std::vector<const Example*>& batch, const Composer& composer) : composer_(composer) {
    for (const Example* ex : batch) {
      const auto flat = flatten(ex->tree);
      const int base = static_cast<int>(nodes_.size());
      std::vector<int> height(flat.size(), 0);
      for (std::size_t i = 0; i < flat.size(); ++i) {
        const auto& f = flat[i];
        GlobalNode g;
        g.gold = label_index(f.label);
        if (f.is_leaf()) {
          g.row = ex->rows.at(static_cast<std::size_t>(f.token));
        } else {
          g.left = base + f.left;
          g.right = base + f.right;
          height[i] = 1 + std::max(height[static_cast<std::size_t>(f.left)], height[static_cast<std::size_t>(f.right)]);
        }
        if (static_cast<std::size_t>(height[i]) >= buckets_.size()) buckets_.resize(static_cast<std::size_t>(height[i]) + 1);
        buckets_[static_cast<std::size_t>(height[i])].push_back(base + static_cast<int>(i));
        nodes_.push_back(g);
      }
    }
  }

  BatchStats forward() {
    const RntnParams& params = composer_.params();
    const int d = params.d;
    const int n = static_cast<int>(nodes_.size());
    P_.resize(d, n);
    if (!buckets_.empty())
      for (int g : buckets_[0]) P_.col(g) = params.embeddings.vectors.col(nodes_[static_cast<std::size_t>(g)].row);
    for (std::size_t h = 1; h < buckets_.size(); ++h) {
      const auto X = gather(buckets_[h]);
      const Eigen::MatrixXd parents = composer_.forward(X);
      for (std::size_t c = 0; c < buckets_[h].size(); ++c) P_.col(buckets_[h][c]) = parents.col(static_cast<Eigen::Index>(c));
    }

    probs_ = params.C * P_;
    BatchStats stats;
    stats.nodes = n;
    for (int g = 0; g < n; ++g) {
      auto col = probs_.col(g);
      Eigen::Index best;
      col.maxCoeff(&best);
      col = (col.array() - col.maxCoeff()).exp();
      col /= col.sum();
      const int gold = nodes_[static_cast<std::size_t>(g)].gold;
      stats.loss -= std::log(col[gold]);
      if (best == gold) ++stats.correct;
    }
    return stats;
  }

  void backward(Gradients& grads) const {
    const RntnParams& params = composer_.params();
    const int d = params.d;
    const int two_d = 2 * d;
    Eigen::MatrixXd dlogits = probs_;
    for (std::size_t g = 0; g < nodes_.size(); ++g) dlogits(nodes_[g].gold, static_cast<Eigen::Index>(g)) -= 1.0;
    grads.C.noalias() += dlogits * P_.transpose();
    Eigen::MatrixXd delta = params.C.transpose() * dlogits;

    for (std::size_t h = buckets_.size(); h-- > 1;) {
      const auto& bucket = buckets_[h];
      const auto m = static_cast<Eigen::Index>(bucket.size());
      const auto X = gather(bucket);
      Eigen::MatrixXd DZ(d, m);
      Eigen::MatrixXd KR(two_d * d, m);
      for (Eigen::Index c = 0; c < m; ++c) {
        const int g = bucket[static_cast<std::size_t>(c)];
        DZ.col(c) = delta.col(g).array() * (1.0 - P_.col(g).array().square());
        for (int k = 0; k < d; ++k) KR.col(c).segment(two_d * k, two_d) = DZ(k, c) * X.col(c);
      }
      grads.W.noalias() += DZ * X.transpose();
      grads.V.noalias() += X * KR.transpose();
      Eigen::MatrixXd dX = params.W.transpose() * DZ;
      dX.noalias() += composer_.symmetric() * KR;
      for (Eigen::Index c = 0; c < m; ++c) {
        const auto& node = nodes_[static_cast<std::size_t>(bucket[static_cast<std::size_t>(c)])];
        delta.col(node.left) += dX.col(c).head(d);
        delta.col(node.right) += dX.col(c).tail(d);
      }
    }
    if (params.embeddings.trainable && !buckets_.empty())
      for (int g : buckets_[0]) grads.E.col(nodes_[static_cast<std::size_t>(g)].row) += delta.col(g);
  }

  const Eigen::MatrixXd& vectors() const { return P_; }
  const Eigen::MatrixXd& probs() const { return probs_; }

 private:
  Eigen::MatrixXd gather(const std::vector<int>& bucket) const {
    const int d = composer_.params().d;
    Eigen::MatrixXd X(2 * d, static_cast<Eigen::Index>(bucket.size()));
    for (std::size_t c = 0; c < bucket.size(); ++c) {
      const auto& node = nodes_[static_cast<std::size_t>(bucket[c])];
      X.col(static_cast<Eigen::Index>(c)) << P_.col(node.left), P_.col(node.right);
    }
    return X;
  }

  const Composer& composer_;
  std::vector<GlobalNode> nodes_;
  std::vector<std::vector<int>> buckets_;
  Eigen::MatrixXd P_;
  Eigen::MatrixXd probs_;
};

}  // namespace

std::vector<Example> make_examples(const std::vector<ParseTree>& trees, const EmbeddingTable& table,
                                   const std::vector<std::vector<PosTag>>& tags) {
  std::vector<Example> out;
  out.reserve(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto words = trees[i].words();
    out.push_back({trees[i], leaf_rows(words, table, tags.empty() ? std::vector<PosTag>{} : tags[i])});
  }
  return out;
}

BatchStats run_batch(const std::vector<const Example*>& batch, const Composer& composer, Gradients* grads) {
  Engine engine(batch, composer);
  const BatchStats stats = engine.forward();
  if (grads) engine.backward(*grads);
  return stats;
}

GoldForward forward_gold(const ParseTree& tree, const RntnParams& params, const std::vector<PosTag>& tags) {
  GoldForward out;
  out.nodes = flatten(tree);
  out.rows = leaf_rows(tree.words(), params.embeddings, tags);
  const Example ex{tree, out.rows};
  const Composer composer(params);
  Engine engine({&ex}, composer);
  const BatchStats stats = engine.forward();
  out.loss = stats.loss;
  out.correct = stats.correct;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    out.states.push_back({engine.vectors().col(c), engine.probs().col(c), out.nodes[i].begin, out.nodes[i].end});
  }
  return out;
}

Gradients backward(const ParseTree& tree, const GoldForward& fwd, const RntnParams& params) {
  Gradients grads = Gradients::zeros_like(params);
  const Example ex{tree, fwd.rows};
  const Composer composer(params);
  Engine engine({&ex}, composer);
  engine.forward();
  engine.backward(grads);
  return grads;
}

}  // namespace causality
