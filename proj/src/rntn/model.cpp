#include <cmath>
#include <random>

#include "causality/rntn.hpp"

namespace causality {

namespace {

void fill_uniform(Eigen::MatrixXd& m, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-r, r);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = u(rng);
}

}  // namespace

RntnParams zero_params(EmbeddingTable embeddings, int labels) {
  RntnParams p;
  p.d = embeddings.dim();
  const int d = p.d;
  p.V = Eigen::MatrixXd::Zero(2 * d, 2 * d * d);
  p.W = Eigen::MatrixXd::Zero(d, 2 * d);
  p.C = Eigen::MatrixXd::Zero(labels, d);
  p.embeddings = std::move(embeddings);
  return p;
}

RntnParams init_params(EmbeddingTable embeddings, std::uint64_t seed, int labels) {
  RntnParams p = zero_params(std::move(embeddings), labels);
  const int d = p.d;
  std::mt19937_64 rng(seed);
  fill_uniform(p.W, 1.0 / std::sqrt(2.0 * d), rng);
  p.W.leftCols(d).diagonal().array() += 0.5;
  p.W.rightCols(d).diagonal().array() += 0.5;
  fill_uniform(p.V, 1.0 / (4.0 * d), rng);
  fill_uniform(p.C, std::sqrt(6.0 / (labels + d)), rng);
  return p;
}

Eigen::VectorXd activation(const Eigen::VectorXd& z) { return z.array().tanh(); }

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

Eigen::VectorXd compose(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj, const RntnParams& params) {
  const int d = params.d;
  Eigen::VectorXd x(2 * d);
  x << vi, vj;
  Eigen::VectorXd z = params.W * x;
  for (int k = 0; k < d; ++k) z[k] += x.dot(params.slice(k) * x);
  return activation(z);
}

Eigen::VectorXd classify(const Eigen::VectorXd& p, const RntnParams& params) { return softmax(params.C * p); }

std::vector<int> leaf_rows(const std::vector<std::string>& words, const EmbeddingTable& table,
                           const std::vector<PosTag>& tags) {
  std::vector<int> rows;
  rows.reserve(words.size());
  if (table.kind == EmbeddingKind::Random) {
    for (const auto& w : words) rows.push_back(table.vocab.index(w));
    return rows;
  }
  const auto resolved = tags.empty() ? tag_pos(words) : tags;
  for (std::size_t i = 0; i < words.size(); ++i) rows.push_back(table.lookup(words[i], pos_name(resolved[i])));
  return rows;
}

Composer::Composer(const RntnParams& params) : params_(&params) {
  const int d = params.d;
  const int n = 2 * d;
  stacked_.resize(n * d, n);
  symmetric_.resize(n, n * d);
  for (int k = 0; k < d; ++k) {
    stacked_.middleRows(n * k, n) = params.slice(k);
    symmetric_.middleCols(n * k, n) = params.slice(k) + params.slice(k).transpose();
  }
}

Eigen::MatrixXd Composer::forward(const Eigen::MatrixXd& X) const {
  const int d = params_->d;
  const int n = 2 * d;
  Eigen::MatrixXd Z = params_->W * X;
  const Eigen::MatrixXd T = stacked_ * X;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    Eigen::Map<const Eigen::MatrixXd> Tc(T.col(c).data(), n, d);
    Z.col(c).noalias() += Tc.transpose() * X.col(c);
  }
  return Z.array().tanh();
}

Gradients Gradients::zeros_like(const RntnParams& params) {
  Gradients g;
  g.V = Eigen::MatrixXd::Zero(params.V.rows(), params.V.cols());
  g.W = Eigen::MatrixXd::Zero(params.W.rows(), params.W.cols());
  g.C = Eigen::MatrixXd::Zero(params.C.rows(), params.C.cols());
  g.E = Eigen::MatrixXd::Zero(params.embeddings.vectors.rows(), params.embeddings.vectors.cols());
  return g;
}

void Gradients::set_zero() {
  V.setZero();
  W.setZero();
  C.setZero();
  E.setZero();
}

Gradients& Gradients::operator*=(double s) {
  V *= s;
  W *= s;
  C *= s;
  E *= s;
  return *this;
}

AdaGradState AdaGradState::zeros_like(const RntnParams& params) { return {Gradients::zeros_like(params)}; }

namespace {

void adagrad(Eigen::MatrixXd& theta, const Eigen::MatrixXd& g, Eigen::MatrixXd& acc, double lr, double eps) {
  acc.array() += g.array().square();
  theta.array() -= lr * g.array() / (acc.array().sqrt() + eps);
}

}  // namespace

void adagrad_step(RntnParams& params, const Gradients& grads, AdaGradState& state, double lr, double eps) {
  adagrad(params.V, grads.V, state.acc.V, lr, eps);
  adagrad(params.W, grads.W, state.acc.W, lr, eps);
  adagrad(params.C, grads.C, state.acc.C, lr, eps);
  if (params.embeddings.trainable) adagrad(params.embeddings.vectors, grads.E, state.acc.E, lr, eps);
}

}  // namespace causality
