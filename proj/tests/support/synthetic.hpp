#pragma once

#include <random>
#include <string>
#include <vector>

#include "causality/brat.hpp"

namespace synthetic {

// Small template treebank of conditional requirements, produced as brat
// documents so that trees come out of the real exporter.
class RequirementGenerator {
 public:
  explicit RequirementGenerator(std::uint64_t seed) : rng_(seed) {}

  causality::NamedDoc make(const std::string& name) {
    tokens_.clear();
    spans_.clear();
    using causality::Label;
    switch (pick(4)) {
      case 0: {  // If S , then S .
        const int rel = open(Label::CauseEffectRelation);
        const int cause = open(Label::Cause);
        word("If", Label::KeyC);
        statement(false);
        close(cause);
        tokens_.push_back(",");
        const int effect = open(Label::Effect);
        word("then", Label::KeyC);
        statement(true);
        close(effect);
        close(rel);
        break;
      }
      case 1: {  // If S and S , then S .
        const int rel = open(Label::CauseEffectRelation);
        const int cause = open(Label::Cause);
        word("If", Label::KeyC);
        const int conj = open(Label::And);
        statement(false);
        tokens_.push_back("and");
        statement(false);
        close(conj);
        close(cause);
        tokens_.push_back(",");
        const int effect = open(Label::Effect);
        word("then", Label::KeyC);
        statement(true);
        close(effect);
        close(rel);
        break;
      }
      case 2: {  // S when S .
        const int rel = open(Label::CauseEffectRelation);
        const int effect = open(Label::Effect);
        statement(true, false, "must");
        close(effect);
        const int cause = open(Label::Cause);
        word("when", Label::KeyC);
        statement(false);
        close(cause);
        close(rel);
        break;
      }
      default: {  // S .
        const int nc = open(Label::NonCausal);
        statement(true, false, "can");
        close(nc);
        break;
      }
    }
    tokens_.push_back(".");
    return {name, render()};
  }

  std::vector<causality::NamedDoc> corpus(int n) {
    std::vector<causality::NamedDoc> out;
    for (int i = 0; i < n; ++i) out.push_back(make("req" + std::to_string(1000 + i).substr(1)));
    return out;
  }

 private:
  struct Span {
    int first;
    int last;
    causality::Label label;
  };

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  int open(causality::Label l) {
    spans_.push_back({static_cast<int>(tokens_.size()), -1, l});
    return static_cast<int>(spans_.size()) - 1;
  }
  void close(int slot) { spans_[static_cast<std::size_t>(slot)].last = static_cast<int>(tokens_.size()) - 1; }

  void word(const std::string& w, causality::Label l) {
    spans_.push_back({static_cast<int>(tokens_.size()), static_cast<int>(tokens_.size()), l});
    tokens_.push_back(w);
  }

  void phrase(const std::vector<std::string>& words) { tokens_.insert(tokens_.end(), words.begin(), words.end()); }

  void statement(bool effect, bool wrap = true, const std::string& modal = "shall") {
    static const std::vector<std::vector<std::string>> vars = {
        {"the", "pump"}, {"the", "user"}, {"the", "valve"}, {"the", "door", "sensor"}, {"the", "controller"}};
    static const std::vector<std::vector<std::string>> conds = {
        {"is", "pressed"}, {"is", "active"}, {"fails"}, {"is", "not", "available"}};
    static const std::vector<std::vector<std::string>> acts = {
        {"", "stop"}, {"", "open"}, {"", "send", "a", "message"}, {"", "restart"}};
    using causality::Label;
    const int st = wrap ? open(Label::Statement) : -1;
    const int var = open(Label::Variable);
    phrase(vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))]);
    close(var);
    auto c = effect ? acts[static_cast<std::size_t>(pick(static_cast<int>(acts.size())))]
                    : conds[static_cast<std::size_t>(pick(static_cast<int>(conds.size())))];
    if (effect) c.front() = modal;
    if (c.size() == 1) {
      word(c[0], Label::Condition);
    } else {
      const int cond = open(Label::Condition);
      phrase(c);
      close(cond);
    }
    if (wrap) close(st);
  }

  causality::StandoffDoc render() const {
    std::string text;
    std::vector<std::size_t> starts;
    for (const auto& t : tokens_) {
      if (!text.empty()) text += ' ';
      starts.push_back(text.size());
      text += t;
    }
    std::string ann;
    int id = 1;
    for (const auto& s : spans_) {
      const std::size_t b = starts[static_cast<std::size_t>(s.first)];
      const std::size_t e = starts[static_cast<std::size_t>(s.last)] + tokens_[static_cast<std::size_t>(s.last)].size();
      ann += "T" + std::to_string(id++) + "\t" + std::string(causality::label_name(s.label)) + " " + std::to_string(b) +
             " " + std::to_string(e) + "\t" + text.substr(b, e - b) + "\n";
    }
    return causality::parse_standoff(ann, text);
  }

  std::mt19937_64 rng_;
  std::vector<std::string> tokens_;
  std::vector<Span> spans_;
};

}  // namespace synthetic
