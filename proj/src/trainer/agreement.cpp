#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "causality/trainer.hpp"

namespace causality {

namespace {

using SpanKey = std::tuple<int, std::size_t, std::size_t>;  // label index, start, end

std::vector<SpanKey> keys(const StandoffDoc& doc) {
  std::vector<SpanKey> out;
  for (const auto& s : doc.spans) out.emplace_back(label_index(s.label), s.start, s.end);
  std::sort(out.begin(), out.end());
  return out;
}

struct Counts {
  long long gold = 0, subject = 0, matched = 0;
};

std::string fmt(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

AgreementReport inter_annotator_agreement(const std::map<std::string, std::vector<NamedDoc>>& docs_by_rater) {
  if (docs_by_rater.size() < 2)
    throw EvalError(EvalError::Kind::TooFewRaters, std::to_string(docs_by_rater.size()) + " rater(s), need 2");

  AgreementReport r;
  std::vector<std::map<std::string, std::vector<SpanKey>>> spans;
  for (const auto& [rater, docs] : docs_by_rater) {
    r.raters.push_back(rater);
    auto& m = spans.emplace_back();
    for (const auto& d : docs) m[d.name] = keys(d.doc);
  }
  const std::size_t n = r.raters.size();
  r.pairwise_f1.assign(n, std::vector<double>(n, 1.0));

  std::array<double, kLabelCount> label_sum{};
  std::array<int, kLabelCount> label_pairs{};
  double total = 0.0;
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t s = 0; s < n; ++s) {
      if (g == s) continue;
      Counts all;
      std::array<Counts, kLabelCount> per{};
      bool shared = false;
      for (const auto& [name, gold] : spans[g]) {
        auto it = spans[s].find(name);
        if (it == spans[s].end()) continue;
        shared = true;
        const auto& subj = it->second;
        std::vector<SpanKey> common;
        std::set_intersection(gold.begin(), gold.end(), subj.begin(), subj.end(), std::back_inserter(common));
        all.gold += static_cast<long long>(gold.size());
        all.subject += static_cast<long long>(subj.size());
        all.matched += static_cast<long long>(common.size());
        for (const auto& k : gold) ++per[static_cast<std::size_t>(std::get<0>(k))].gold;
        for (const auto& k : subj) ++per[static_cast<std::size_t>(std::get<0>(k))].subject;
        for (const auto& k : common) ++per[static_cast<std::size_t>(std::get<0>(k))].matched;
      }
      if (!shared) throw EvalError(EvalError::Kind::NoOverlap, r.raters[g] + " and " + r.raters[s] + " share no documents");

      const double p = all.subject ? static_cast<double>(all.matched) / all.subject : 0.0;
      const double rc = all.gold ? static_cast<double>(all.matched) / all.gold : 0.0;
      r.pairwise_f1[g][s] = f1_score(p, rc);
      total += r.pairwise_f1[g][s];
      for (int l = 0; l < kLabelCount; ++l) {
        const auto& c = per[static_cast<std::size_t>(l)];
        if (c.gold == 0 && c.subject == 0) continue;
        const double lp = c.subject ? static_cast<double>(c.matched) / c.subject : 0.0;
        const double lr = c.gold ? static_cast<double>(c.matched) / c.gold : 0.0;
        label_sum[static_cast<std::size_t>(l)] += f1_score(lp, lr);
        ++label_pairs[static_cast<std::size_t>(l)];
      }
    }
  }
  r.average_f1 = total / static_cast<double>(n * (n - 1));
  for (int l = 0; l < kLabelCount; ++l)
    if (label_pairs[static_cast<std::size_t>(l)])
      r.per_label_f1[static_cast<std::size_t>(l)] = label_sum[static_cast<std::size_t>(l)] / label_pairs[static_cast<std::size_t>(l)];
  return r;
}

std::string format_agreement(const AgreementReport& report) {
  std::size_t w = 7;
  for (const auto& r : report.raters) w = std::max(w, r.size());
  auto pad = [&](const std::string& s) { return s + std::string(w - std::min(w, s.size()), ' '); };
  std::ostringstream out;
  out << pad("gold");
  for (const auto& r : report.raters) out << "  " << pad(r);
  out << '\n';
  for (std::size_t g = 0; g < report.raters.size(); ++g) {
    out << pad(report.raters[g]);
    for (double v : report.pairwise_f1[g]) out << "  " << pad(fmt(v));
    out << '\n';
  }
  out << "average F1 " << fmt(report.average_f1) << '\n';
  for (int l = 0; l < kLabelCount; ++l)
    if (const auto& v = report.per_label_f1[static_cast<std::size_t>(l)])
      out << label_name(label_from_index(l)) << '\t' << fmt(*v) << '\n';
  return out.str();
}

TreebankStats treebank_stats(const std::vector<ParseTree>& trees) {
  TreebankStats s;
  s.sentences = static_cast<int>(trees.size());
  for (const auto& t : trees)
    for (const auto& n : flatten(t)) {
      ++s.counts[static_cast<std::size_t>(label_index(n.label))];
      ++s.segments;
    }
  s.root_count_matches = s.counts[static_cast<std::size_t>(label_index(Label::RootSentence))] == s.sentences;
  return s;
}

std::string format_stats(const std::vector<std::pair<std::string, TreebankStats>>& columns) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"label"};
  for (const auto& [name, st] : columns) head.push_back(name);
  rows.push_back(head);
  for (int l = 0; l < kLabelCount; ++l) {
    std::vector<std::string> row{std::string(label_name(label_from_index(l)))};
    for (const auto& [name, st] : columns) row.push_back(std::to_string(st.counts[static_cast<std::size_t>(l)]));
    rows.push_back(row);
  }
  std::vector<std::string> seg{"segments"}, sent{"sentences"};
  for (const auto& [name, st] : columns) {
    seg.push_back(std::to_string(st.segments));
    sent.push_back(std::to_string(st.sentences));
  }
  rows.push_back(seg);
  rows.push_back(sent);

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0) {
        out << r[c] << std::string(width[c] - r[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - r[c].size(), ' ') << r[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace causality
