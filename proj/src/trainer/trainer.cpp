#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "causality/trainer.hpp"

namespace causality {

std::string to_string(EmbeddingMode mode) {
  switch (mode) {
    case EmbeddingMode::Random: return "random";
    case EmbeddingMode::Pos50: return "pos50";
    case EmbeddingMode::Pos75: return "pos75";
    case EmbeddingMode::Pos100: return "pos100";
  }
  return "random";
}

std::optional<EmbeddingMode> embedding_mode_from_string(std::string_view s) {
  for (auto m : {EmbeddingMode::Random, EmbeddingMode::Pos50, EmbeddingMode::Pos75, EmbeddingMode::Pos100})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

int pos_percent(EmbeddingMode mode) {
  switch (mode) {
    case EmbeddingMode::Pos50: return 50;
    case EmbeddingMode::Pos75: return 75;
    case EmbeddingMode::Pos100: return 100;
    default: return 0;
  }
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.lr > 0) || !std::isfinite(cfg.lr)) throw ConfigError("lr must be positive");
  if (cfg.mini_batch <= 0) throw ConfigError("mini-batch size must be positive");
  if (cfg.wvec_dim <= 0) throw ConfigError("vector dimension must be positive");
  if (cfg.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(cfg.eps > 0)) throw ConfigError("eps must be positive");
  if (!(cfg.init_range > 0)) throw ConfigError("init range must be positive");
  if (cfg.grid_mode) {
    const double lrs[] = {0.1, 0.01, 0.001, 0.0001};
    if (std::none_of(std::begin(lrs), std::end(lrs), [&](double v) { return std::abs(v - cfg.lr) < 1e-12; }))
      throw ConfigError("grid mode: lr must be one of 0.1, 0.01, 0.001, 0.0001");
    const int mbs[] = {16, 24, 32, 64};
    if (std::find(std::begin(mbs), std::end(mbs), cfg.mini_batch) == std::end(mbs))
      throw ConfigError("grid mode: mini-batch must be one of 16, 24, 32, 64");
    const int dims[] = {30, 50, 60};
    if (std::find(std::begin(dims), std::end(dims), cfg.wvec_dim) == std::end(dims))
      throw ConfigError("grid mode: dim must be one of 30, 50, 60");
  }
}

std::string describe(const TrainConfig& cfg) {
  static const char* branching[] = {"left", "right", "both"};
  std::ostringstream out;
  out << "lr=" << cfg.lr << " mb=" << cfg.mini_batch << " dim=" << cfg.wvec_dim << " epochs=" << cfg.epochs
      << " eps=" << cfg.eps << " seed=" << cfg.seed << " embedding=" << to_string(cfg.embedding)
      << " branching=" << branching[static_cast<int>(cfg.branching_data)];
  return out.str();
}

std::string format_epoch(const EpochLog& e) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.6f\t%.6f", e.epoch, e.train_loss, e.train_acc, e.val_acc);
  return buf;
}

TrainError::TrainError(int epoch, const std::string& detail)
    : std::runtime_error("NonFiniteLoss at epoch " + std::to_string(epoch) + ": " + detail), epoch_(epoch) {}

namespace {

std::vector<PosTag> tags_for(const Corpus& c, std::size_t i) {
  if (i < c.tags.size() && !c.tags[i].empty()) return c.tags[i];
  return tag_pos(c.trees[i].words());
}

std::vector<std::vector<PosTag>> all_tags(const Corpus& c) {
  std::vector<std::vector<PosTag>> out;
  out.reserve(c.trees.size());
  for (std::size_t i = 0; i < c.trees.size(); ++i) out.push_back(tags_for(c, i));
  return out;
}

std::vector<const Example*> pointers(const std::vector<Example>& xs) {
  std::vector<const Example*> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(&x);
  return out;
}

std::vector<Example> examples_for(const Corpus& c, const EmbeddingTable& table) {
  if (table.kind == EmbeddingKind::Pos) return make_examples(c.trees, table, all_tags(c));
  return make_examples(c.trees, table);
}

}  // namespace

EmbeddingTable make_embeddings(const TrainConfig& cfg, const std::vector<const Corpus*>& corpora,
                               const EmbeddingTable* pretrained) {
  if (corpora.empty()) throw ConfigError("no corpus to build embeddings from");
  if (cfg.embedding == EmbeddingMode::Random)
    return init_random(vocab_from_trees(corpora.front()->trees), cfg.wvec_dim, cfg.init_range, cfg.seed);

  const auto weighting = pos_weighting(cfg.wvec_dim, pos_percent(cfg.embedding));
  if (weighting.pretrained_dims > 0 && pretrained == nullptr)
    throw ConfigError(to_string(cfg.embedding) + " needs pretrained word vectors");
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::vector<PosTag>> tags;
  for (const Corpus* c : corpora) {
    for (std::size_t i = 0; i < c->trees.size(); ++i) {
      sentences.push_back(c->trees[i].words());
      tags.push_back(tags_for(*c, i));
    }
  }
  return build_pos_table(sentences, tags, weighting, pretrained);
}

GoldAccuracy gold_structure_accuracy(const Corpus& corpus, const RntnParams& params) {
  GoldAccuracy out;
  if (corpus.trees.empty()) return out;
  const auto xs = examples_for(corpus, params.embeddings);
  const Composer composer(params);
  const auto stats = run_batch(pointers(xs), composer, nullptr);
  out.loss = stats.loss;
  out.correct = stats.correct;
  out.nodes = stats.nodes;
  return out;
}

TrainResult train(const Corpus& train_set, const Corpus& val_set, const TrainConfig& cfg,
                  std::optional<EmbeddingTable> embeddings, const std::function<void(const EpochLog&)>& on_epoch) {
  validate(cfg);
  if (train_set.trees.empty()) throw ConfigError("empty training set");
  if (val_set.trees.empty()) throw ConfigError("empty validation set");

  EmbeddingTable table = embeddings ? std::move(*embeddings) : make_embeddings(cfg, {&train_set, &val_set});
  if (table.dim() != cfg.wvec_dim)
    throw ConfigError("embedding dimension " + std::to_string(table.dim()) + " != dim " + std::to_string(cfg.wvec_dim));

  TrainResult result;
  result.best.params = init_params(std::move(table), cfg.seed + 1);
  result.best.state = AdaGradState::zeros_like(result.best.params);
  result.best.meta = {cfg.lr, cfg.eps, cfg.mini_batch, cfg.epochs, cfg.seed, 0, 0.0, describe(cfg)};

  std::ostringstream log;
  log << "# " << describe(cfg) << "\n# train=" << train_set.trees.size() << " val=" << val_set.trees.size()
      << "\n# epoch\ttrain_loss\ttrain_acc\tval_acc\n";
  result.log_text = log.str();
  if (cfg.epochs == 0) return result;

  RntnParams params = result.best.params;
  AdaGradState state = result.best.state;
  const auto train_xs = examples_for(train_set, params.embeddings);
  const auto val_xs = examples_for(val_set, params.embeddings);
  auto order = pointers(train_xs);
  const auto val_ptrs = pointers(val_xs);
  std::mt19937_64 rng(cfg.seed + 2);
  Gradients grads = Gradients::zeros_like(params);
  const auto batch_size = static_cast<std::size_t>(cfg.mini_batch);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t at = 0; at < order.size(); at += batch_size) {
      const std::vector<const Example*> batch(order.begin() + static_cast<std::ptrdiff_t>(at),
                                              order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), at + batch_size)));
      grads.set_zero();
      const Composer composer(params);
      const auto stats = run_batch(batch, composer, &grads);
      if (!std::isfinite(stats.loss))
        throw TrainError(epoch, "batch starting at position " + std::to_string(at) + " has loss " +
                                    std::to_string(stats.loss));
      grads *= 1.0 / static_cast<double>(batch.size());
      adagrad_step(params, grads, state, cfg.lr, cfg.eps);
    }

    const Composer composer(params);
    const auto tr = run_batch(order, composer, nullptr);
    const auto va = run_batch(val_ptrs, composer, nullptr);
    if (!std::isfinite(tr.loss)) throw TrainError(epoch, "training loss " + std::to_string(tr.loss));
    EpochLog e{epoch, tr.loss / static_cast<double>(order.size()), static_cast<double>(tr.correct) / tr.nodes,
               static_cast<double>(va.correct) / va.nodes};
    result.log.push_back(e);
    result.log_text += format_epoch(e) + "\n";
    if (on_epoch) on_epoch(e);

    if (epoch == 1 || e.val_acc > result.best.meta.val_accuracy) {
      result.best.params = params;
      result.best.state = state;
      result.best.meta.epoch = epoch;
      result.best.meta.val_accuracy = e.val_acc;
    }
  }
  return result;
}

}  // namespace causality
