#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "causality/trainer.hpp"

namespace causality {

namespace {

const char* kind_name(EvalError::Kind k) {
  switch (k) {
    case EvalError::Kind::LabelSetMismatch: return "LabelSetMismatch";
    case EvalError::Kind::TokenMismatch: return "TokenMismatch";
    case EvalError::Kind::NoOverlap: return "NoOverlap";
    case EvalError::Kind::TooFewRaters: return "TooFewRaters";
  }
  return "EvalError";
}

using Key = std::tuple<int, int, int>;  // begin, end, label index

void check_labels(const RntnParams& model) {
  if (model.labels() != kLabelCount)
    throw EvalError(EvalError::Kind::LabelSetMismatch, "model has " + std::to_string(model.labels()) +
                                                           " labels, treebank has " + std::to_string(kLabelCount));
}

// Per predicted node: span length and whether it matches gold.
struct Scored {
  int length;
  bool correct;
};

std::vector<Scored> score_pair(const ParseTree& gold, const ParseTree& pred, std::size_t index,
                               std::array<LabelScore, kLabelCount>* per_label) {
  if (gold.words() != pred.words())
    throw EvalError(EvalError::Kind::TokenMismatch, "sentence " + std::to_string(index + 1) + ": tokens differ");
  std::set<Key> gold_keys;
  for (const auto& n : flatten(gold)) {
    const int l = label_index(n.label);
    gold_keys.emplace(n.begin, n.end, l);
    if (per_label) ++(*per_label)[static_cast<std::size_t>(l)].support;
  }
  std::vector<Scored> out;
  for (const auto& n : flatten(pred)) {
    const int l = label_index(n.label);
    const bool ok = gold_keys.count({n.begin, n.end, l}) > 0;
    out.push_back({n.span_length(), ok});
    if (per_label) {
      auto& s = (*per_label)[static_cast<std::size_t>(l)];
      ++s.predicted;
      if (ok) ++s.matched;
    }
  }
  return out;
}

std::map<int, double> cumulative(const std::vector<Scored>& nodes) {
  std::map<int, std::pair<int, int>> by_length;  // length -> (correct, total)
  int max_len = 0;
  for (const auto& s : nodes) {
    auto& c = by_length[s.length];
    c.first += s.correct;
    ++c.second;
    max_len = std::max(max_len, s.length);
  }
  std::map<int, double> out;
  int correct = 0, total = 0;
  for (int n = 1; n <= max_len; ++n) {
    if (auto it = by_length.find(n); it != by_length.end()) {
      correct += it->second.first;
      total += it->second.second;
    }
    out[n] = total ? static_cast<double>(correct) / total : 0.0;
  }
  return out;
}

std::vector<Scored> score_all(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& predicted,
                              std::array<LabelScore, kLabelCount>* per_label) {
  if (gold.size() != predicted.size())
    throw EvalError(EvalError::Kind::TokenMismatch, std::to_string(gold.size()) + " gold trees, " +
                                                        std::to_string(predicted.size()) + " predicted");
  std::vector<Scored> all;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto s = score_pair(gold[i], predicted[i], i, per_label);
    all.insert(all.end(), s.begin(), s.end());
  }
  return all;
}

std::string fmt2(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

EvalError::EvalError(Kind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

double f1_score(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

EvalReport evaluate_predictions(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& predicted) {
  EvalReport r;
  const auto nodes = score_all(gold, predicted, &r.per_label);
  r.sentences = static_cast<int>(gold.size());
  r.nodes = static_cast<int>(nodes.size());
  r.correct = static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const Scored& s) { return s.correct; }));
  r.node_accuracy = r.nodes ? static_cast<double>(r.correct) / r.nodes : 0.0;

  int with_support = 0;
  for (auto& s : r.per_label) {
    s.recall = s.support ? static_cast<double>(s.matched) / s.support : 0.0;
    s.precision = s.predicted ? static_cast<double>(s.matched) / s.predicted : 0.0;
    s.f1 = f1_score(s.precision, s.recall);
    if (s.support == 0) continue;
    ++with_support;
    r.mean_recall += s.recall;
    r.mean_precision += s.precision;
    r.mean_f1 += s.f1;
  }
  if (with_support) {
    r.mean_recall /= with_support;
    r.mean_precision /= with_support;
    r.mean_f1 /= with_support;
  }
  r.cumulative_accuracy_by_ngram = cumulative(nodes);
  return r;
}

std::vector<ParseTree> predict_all(const RntnParams& model, const Corpus& corpus, ScoreMode mode) {
  check_labels(model);
  const Composer composer(model);
  std::vector<ParseTree> out;
  out.reserve(corpus.trees.size());
  for (std::size_t i = 0; i < corpus.trees.size(); ++i) {
    const auto words = corpus.trees[i].words();
    const std::vector<PosTag> tags = i < corpus.tags.size() ? corpus.tags[i] : std::vector<PosTag>{};
    out.push_back(greedy_parse(words, leaf_rows(words, model.embeddings, tags), composer, mode));
  }
  return out;
}

EvalReport evaluate(const RntnParams& model, const Corpus& test, ScoreMode mode) {
  return evaluate_predictions(test.trees, predict_all(model, test, mode));
}

std::map<int, double> cumulative_ngram_accuracy(const std::vector<ParseTree>& gold,
                                                const std::vector<ParseTree>& predicted) {
  return cumulative(score_all(gold, predicted, nullptr));
}

std::map<int, double> cumulative_ngram_accuracy(const RntnParams& model, const Corpus& test, ScoreMode mode) {
  return cumulative_ngram_accuracy(test.trees, predict_all(model, test, mode));
}

std::string format_report(const EvalReport& report) {
  std::vector<std::string> head{""};
  std::vector<std::string> rows[3] = {{"Recall"}, {"Precision"}, {"F1"}};
  for (int i = 0; i < kLabelCount; ++i) {
    const auto& s = report.per_label[static_cast<std::size_t>(i)];
    head.emplace_back(label_name(label_from_index(i)));
    const bool any = s.support > 0;
    rows[0].push_back(any ? fmt2(s.recall) : "-");
    rows[1].push_back(any ? fmt2(s.precision) : "-");
    rows[2].push_back(any ? fmt2(s.f1) : "-");
  }
  head.emplace_back("Mean");
  rows[0].push_back(fmt2(report.mean_recall));
  rows[1].push_back(fmt2(report.mean_precision));
  rows[2].push_back(fmt2(report.mean_f1));

  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << "  ";
      out << cells[c];
      if (c + 1 < cells.size()) out << std::string(width[c] - cells[c].size(), ' ');
    }
    out << '\n';
  };
  out << "sentences " << report.sentences << "  nodes " << report.nodes << "  accuracy "
      << fmt2(100.0 * report.node_accuracy) << "%\n";
  line(head);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["sentences"] = report.sentences;
  j["nodes"] = report.nodes;
  j["correct"] = report.correct;
  j["node_accuracy"] = report.node_accuracy;
  j["mean"] = {{"recall", report.mean_recall}, {"precision", report.mean_precision}, {"f1", report.mean_f1}};
  auto labels = nlohmann::ordered_json::array();
  for (int i = 0; i < kLabelCount; ++i) {
    const auto& s = report.per_label[static_cast<std::size_t>(i)];
    const Label l = label_from_index(i);
    labels.push_back({{"id", label_id(l)},
                      {"label", std::string(label_name(l))},
                      {"support", s.support},
                      {"predicted", s.predicted},
                      {"matched", s.matched},
                      {"recall", s.recall},
                      {"precision", s.precision},
                      {"f1", s.f1}});
  }
  j["per_label"] = labels;
  auto cum = nlohmann::ordered_json::object();
  for (const auto& [n, v] : report.cumulative_accuracy_by_ngram) cum[std::to_string(n)] = v;
  j["cumulative_accuracy_by_ngram"] = cum;
  return j.dump(2) + "\n";
}

}  // namespace causality
