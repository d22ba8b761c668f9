#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "causality/trainer.hpp"

namespace causality {

namespace {

const char* kind_name(SplitError::Kind k) {
  return k == SplitError::Kind::TooFewSentences ? "TooFewSentences" : "BadFractions";
}

using Counts = std::array<int, kLabelCount>;

Counts label_counts(const ParseTree& t) {
  Counts c{};
  for (const auto& n : flatten(t)) ++c[static_cast<std::size_t>(label_index(n.label))];
  return c;
}

}  // namespace

SplitError::SplitError(Kind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

std::array<int, 3> split_sizes(int n, const SplitSpec& spec) {
  const double fr[3] = {spec.train_frac, spec.val_frac, spec.test_frac};
  for (double f : fr)
    if (f < 0 || !std::isfinite(f)) throw SplitError(SplitError::Kind::BadFractions, "fractions must be non-negative");
  if (std::abs(fr[0] + fr[1] + fr[2] - 1.0) > 1e-9)
    throw SplitError(SplitError::Kind::BadFractions, "fractions must sum to 1");
  if (n < 3) throw SplitError(SplitError::Kind::TooFewSentences, std::to_string(n) + " sentence(s), need at least 3");

  std::array<int, 3> s{static_cast<int>(std::lround(n * fr[0])), static_cast<int>(std::lround(n * fr[1])), 0};
  s[2] = n - s[0] - s[1];
  // Every split with a positive fraction gets at least one sentence, taken
  // from the largest split.
  for (int i = 0; i < 3; ++i) {
    if (fr[i] > 0 && s[static_cast<std::size_t>(i)] <= 0) {
      auto largest = std::max_element(s.begin(), s.end());
      const int need = 1 - s[static_cast<std::size_t>(i)];
      *largest -= need;
      s[static_cast<std::size_t>(i)] += need;
    }
  }
  return s;
}

SplitIndices split_indices(const std::vector<ParseTree>& trees, const SplitSpec& spec) {
  const int n = static_cast<int>(trees.size());
  const auto sizes = split_sizes(n, spec);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Counts> counts;
  counts.reserve(trees.size());
  for (const auto& t : trees) counts.push_back(label_counts(t));
  Counts total{};
  for (const auto& c : counts)
    for (int l = 0; l < kLabelCount; ++l) total[static_cast<std::size_t>(l)] += c[static_cast<std::size_t>(l)];

  std::array<std::vector<int>, 3> parts;
  if (!spec.stratify_by_label) {
    int at = 0;
    for (int s = 0; s < 3; ++s)
      for (int i = 0; i < sizes[static_cast<std::size_t>(s)]; ++i) parts[static_cast<std::size_t>(s)].push_back(order[static_cast<std::size_t>(at++)]);
  } else {
    // Sentences holding rare labels are placed first, each into the split
    // whose relative per-label shortfall it reduces most.
    auto rarity = [&](int t) {
      int r = n * 1000;
      for (int l = 0; l < kLabelCount; ++l)
        if (counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)] > 0) r = std::min(r, total[static_cast<std::size_t>(l)]);
      return r;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rarity(a) < rarity(b); });

    std::array<Counts, 3> assigned{};
    for (int t : order) {
      int best = -1;
      double best_score = 0.0;
      double best_room = 0.0;
      for (int s = 0; s < 3; ++s) {
        const auto su = static_cast<std::size_t>(s);
        const int cap = sizes[su];
        const int room = cap - static_cast<int>(parts[su].size());
        if (room <= 0) continue;
        double score = 0.0;
        for (int l = 0; l < kLabelCount; ++l) {
          const auto lu = static_cast<std::size_t>(l);
          const int c = counts[static_cast<std::size_t>(t)][lu];
          if (c == 0) continue;
          const double want = static_cast<double>(total[lu]) * cap / n;
          score += c * (want - assigned[su][lu]) / want;
        }
        const double room_share = static_cast<double>(room) / cap;
        if (best < 0 || score > best_score + 1e-12 || (std::abs(score - best_score) <= 1e-12 && room_share > best_room)) {
          best = s;
          best_score = score;
          best_room = room_share;
        }
      }
      const auto bu = static_cast<std::size_t>(best);
      parts[bu].push_back(t);
      for (int l = 0; l < kLabelCount; ++l)
        assigned[bu][static_cast<std::size_t>(l)] += counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
    }
  }

  SplitIndices out;
  for (auto& p : parts) std::sort(p.begin(), p.end());
  out.train = parts[0];
  out.val = parts[1];
  out.test = parts[2];

  const double all = std::accumulate(total.begin(), total.end(), 0.0);
  for (const auto& p : parts) {
    if (p.empty()) continue;
    Counts c{};
    for (int t : p)
      for (int l = 0; l < kLabelCount; ++l) c[static_cast<std::size_t>(l)] += counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
    const double sum = std::accumulate(c.begin(), c.end(), 0.0);
    for (int l = 0; l < kLabelCount; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      out.tolerance = std::max(out.tolerance, std::abs(c[lu] / sum - total[lu] / all));
    }
  }
  return out;
}

Split split_dataset(const std::vector<ParseTree>& trees, const SplitSpec& spec) {
  const auto idx = split_indices(trees, spec);
  Split s;
  for (int i : idx.train) s.train.push_back(trees[static_cast<std::size_t>(i)]);
  for (int i : idx.val) s.val.push_back(trees[static_cast<std::size_t>(i)]);
  for (int i : idx.test) s.test.push_back(trees[static_cast<std::size_t>(i)]);
  s.tolerance = idx.tolerance;
  return s;
}

std::vector<std::vector<int>> kfold_indices(int n, int k, std::uint64_t seed) {
  if (k < 2) throw SplitError(SplitError::Kind::BadFractions, "k-fold needs k >= 2");
  if (n < k) throw SplitError(SplitError::Kind::TooFewSentences, std::to_string(n) + " sentences for " + std::to_string(k) + " folds");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) folds[static_cast<std::size_t>(i % k)].push_back(order[static_cast<std::size_t>(i)]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

}  // namespace causality
