#include "causality/rntn.hpp"

namespace causality {

namespace {

struct Span {
  Eigen::VectorXd vector;
  ParseTree tree;
};

struct Candidate {
  Eigen::VectorXd vector;
  Eigen::VectorXd probs;
  double score = 0.0;
};

Label argmax_label(const Eigen::VectorXd& probs) {
  Eigen::Index best;
  probs.maxCoeff(&best);
  return label_from_index(static_cast<int>(best));
}

double score(const Eigen::VectorXd& probs, ScoreMode mode) {
  if (mode == ScoreMode::MaxProbability) return probs.maxCoeff();
  return 1.0 - probs[label_index(Label::Word)] - probs[label_index(Label::Punct)] - probs[label_index(Label::Symbol)];
}

}  // namespace

ParseTree greedy_parse(const std::vector<std::string>& words, const std::vector<int>& rows, const Composer& composer,
                       ScoreMode mode) {
  if (words.empty()) throw ParseError("EmptyInput: nothing to parse");
  const RntnParams& params = composer.params();
  const int d = params.d;

  std::vector<Span> spans;
  spans.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    Eigen::VectorXd v = params.embeddings.vectors.col(rows.at(i));
    spans.push_back({v, ParseTree::leaf(argmax_label(classify(v, params)), words[i])});
  }

  auto evaluate = [&](const std::vector<std::size_t>& lefts) {
    Eigen::MatrixXd X(2 * d, static_cast<Eigen::Index>(lefts.size()));
    for (std::size_t c = 0; c < lefts.size(); ++c)
      X.col(static_cast<Eigen::Index>(c)) << spans[lefts[c]].vector, spans[lefts[c] + 1].vector;
    const Eigen::MatrixXd parents = composer.forward(X);
    std::vector<Candidate> out;
    for (Eigen::Index c = 0; c < parents.cols(); ++c) {
      Eigen::VectorXd p = parents.col(c);
      Eigen::VectorXd probs = classify(p, params);
      const double s = score(probs, mode);
      out.push_back({std::move(p), std::move(probs), s});
    }
    return out;
  };

  std::vector<Candidate> pairs;  // pairs[i] merges spans[i] and spans[i+1]
  if (spans.size() > 1) {
    std::vector<std::size_t> all(spans.size() - 1);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    pairs = evaluate(all);
  }

  while (spans.size() > 1) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pairs.size(); ++i)
      if (pairs[i].score > pairs[best].score) best = i;

    Span merged{pairs[best].vector,
                ParseTree::node(argmax_label(pairs[best].probs), std::move(spans[best].tree),
                                std::move(spans[best + 1].tree))};
    spans[best] = std::move(merged);
    spans.erase(spans.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));

    std::vector<std::size_t> redo;
    if (best > 0) redo.push_back(best - 1);
    if (best + 1 < spans.size()) redo.push_back(best);
    if (!redo.empty()) {
      auto fresh = evaluate(redo);
      for (std::size_t c = 0; c < redo.size(); ++c) pairs[redo[c]] = std::move(fresh[c]);
    }
  }
  return std::move(spans.front().tree);
}

ParseTree greedy_parse(const std::vector<std::string>& words, const RntnParams& params, ScoreMode mode,
                       const std::vector<PosTag>& tags) {
  if (words.empty()) throw ParseError("EmptyInput: nothing to parse");
  const Composer composer(params);
  return greedy_parse(words, leaf_rows(words, params.embeddings, tags), composer, mode);
}

}  // namespace causality
