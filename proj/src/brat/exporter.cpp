#include <algorithm>
#include <optional>

#include "causality/brat.hpp"

namespace causality {

namespace {

struct Segment {
  int begin = 0;
  int end = 0;
  Label label = Label::Word;
  std::string id;  // empty for exporter-created segments
};

struct Item {
  ParseTree tree;
  Label label;
  bool separator = false;
  bool absorbed_separator = false;
};

Label separated_label(Label child, Label parent) {
  if (parent == Label::Sentence || parent == Label::RootSentence) return parent;
  return separated_variant(child).value_or(parent);
}

ParseTree separator_merge(std::vector<Item> items, Label parent) {
  std::vector<Item> units;
  for (auto& item : items) {
    if (item.separator && !units.empty() && !units.back().absorbed_separator && !units.back().separator) {
      Item& last = units.back();
      const Label merged = separated_label(last.label, parent);
      last.tree = ParseTree::node(merged, std::move(last.tree), std::move(item.tree));
      last.label = merged;
      last.absorbed_separator = true;
    } else {
      units.push_back(std::move(item));
    }
  }
  if (units.size() == 1) return units.front().tree.relabeled(parent);
  ParseTree acc = std::move(units.back().tree);
  for (int i = static_cast<int>(units.size()) - 2; i >= 0; --i)
    acc = ParseTree::node(parent, std::move(units[i].tree), std::move(acc));
  return acc;
}

ParseTree cascade(std::vector<Item> items, Label parent, Branching branching) {
  if (branching == Branching::Left) {
    ParseTree acc = std::move(items.front().tree);
    for (std::size_t i = 1; i < items.size(); ++i) acc = ParseTree::node(parent, std::move(acc), std::move(items[i].tree));
    return acc;
  }
  ParseTree acc = std::move(items.back().tree);
  for (int i = static_cast<int>(items.size()) - 2; i >= 0; --i)
    acc = ParseTree::node(parent, std::move(items[i].tree), std::move(acc));
  return acc;
}

class Exporter {
 public:
  Exporter(const StandoffDoc& doc, Branching branching) : doc_(doc), branching_(branching) {}

  ParseTree run() {
    const int n = static_cast<int>(doc_.tokens.size());
    if (n < 2 || !is_final_punct(doc_.tokens.back().text))
      throw ExportError(ExportError::Kind::NoFinalPunct, n - 1, "sentence must end with . ! or ? after at least one token");

    bool has_root = false;
    bool has_body = false;
    for (const auto& s : doc_.spans) {
      if (s.label == Label::RootSentence) {
        if (s.token_begin != 0 || s.token_end != n)
          throw ExportError(ExportError::Kind::InvalidRoot, s.token_begin, s.id + " RootSentence must cover the sentence");
        has_root = true;
        segments_.push_back({s.token_begin, s.token_end, s.label, s.id});
        continue;
      }
      if (s.token_end == n)
        throw ExportError(ExportError::Kind::InvalidRoot, n - 1, s.id + " covers the final punctuation");
      if (s.token_begin == 0 && s.token_end == n - 1) has_body = true;
      segments_.push_back({s.token_begin, s.token_end, s.label, s.id});
    }
    for (int i = 0; i + 1 < n; ++i) {
      if (leaf_label_for(doc_.tokens[i].text) != Label::Word) continue;
      const bool covered = std::any_of(doc_.spans.begin(), doc_.spans.end(), [&](const SpanAnnotation& s) {
        return s.label != Label::RootSentence && s.token_begin <= i && i < s.token_end;
      });
      if (!covered)
        throw ExportError(ExportError::Kind::UncoveredToken, i, "token '" + doc_.tokens[i].text + "' lies in no segment");
    }
    if (!has_root) segments_.push_back({0, n, Label::RootSentence, {}});
    if (!has_body && n - 1 > 1) segments_.push_back({0, n - 1, Label::Sentence, {}});

    std::sort(segments_.begin(), segments_.end(), [](const Segment& a, const Segment& b) {
      return a.begin != b.begin ? a.begin < b.begin : a.end > b.end;
    });
    std::size_t next = 0;
    ParseTree tree = build(next);
    if (next != segments_.size())
      throw ExportError(ExportError::Kind::InvalidRoot, 0, "segments outside the sentence");

    const auto violations = validate_schema(tree);
    if (!violations.empty()) {
      throw ExportError(ExportError::Kind::SchemaViolation, -1,
                        std::string(to_string(violations.front().kind)) + " on " +
                            std::string(label_name(violations.front().label)));
    }
    return tree;
  }

 private:
  // Builds segments_[next] and consumes every segment nested inside it.
  ParseTree build(std::size_t& next) {
    const Segment seg = segments_[next++];
    if (seg.end - seg.begin == 1) {
      if (next < segments_.size() && segments_[next].begin < seg.end) throw_partial(seg, segments_[next]);
      return ParseTree::leaf(seg.label, doc_.tokens[seg.begin].text);
    }

    std::vector<Item> items;
    int pos = seg.begin;
    while (pos < seg.end) {
      if (next < segments_.size() && segments_[next].begin == pos) {
        const Segment& child = segments_[next];
        if (child.end > seg.end || (child.begin == seg.begin && child.end == seg.end)) throw_partial(seg, child);
        const Label label = child.label;
        const int child_end = child.end;
        items.push_back(Item{build(next), label});
        pos = child_end;
      } else {
        if (next < segments_.size() && segments_[next].begin < pos) throw_partial(seg, segments_[next]);
        const auto& text = doc_.tokens[pos].text;
        const Label label = leaf_label_for(text);
        items.push_back(Item{ParseTree::leaf(label, text), label, is_separator(text)});
        ++pos;
      }
    }

    if (items.size() == 2) return ParseTree::node(seg.label, std::move(items[0].tree), std::move(items[1].tree));
    const bool has_separator = std::any_of(items.begin(), items.end(), [](const Item& i) { return i.separator; });
    if (has_separator) return separator_merge(std::move(items), seg.label);
    return cascade(std::move(items), seg.label, branching_);
  }

  [[noreturn]] void throw_partial(const Segment& a, const Segment& b) const {
    auto name = [](const Segment& s) { return s.id.empty() ? std::string(label_name(s.label)) : s.id; };
    throw ExportError(ExportError::Kind::PartialOverlap, b.begin, name(a) + " and " + name(b) + " cross");
  }

  const StandoffDoc& doc_;
  Branching branching_;
  std::vector<Segment> segments_;
};

const char* kind_name(ExportError::Kind kind) {
  switch (kind) {
    case ExportError::Kind::UncoveredToken: return "UncoveredToken";
    case ExportError::Kind::NoFinalPunct: return "NoFinalPunct";
    case ExportError::Kind::PartialOverlap: return "PartialOverlap";
    case ExportError::Kind::InvalidRoot: return "InvalidRoot";
    case ExportError::Kind::SchemaViolation: return "SchemaViolation";
  }
  return "?";
}

std::string join_failures(const std::vector<DocFailure>& failures) {
  std::string out = std::to_string(failures.size()) + " document(s) failed";
  for (const auto& f : failures) out += "\n  " + f.name + ": " + f.message;
  return out;
}

}  // namespace

ExportError::ExportError(Kind kind, int token, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind), token_(token) {}

CorpusError::CorpusError(std::vector<DocFailure> failures)
    : std::runtime_error(join_failures(failures)), failures_(std::move(failures)) {}

ParseTree export_tree(const StandoffDoc& doc, Branching branching) { return Exporter(doc, branching).run(); }

std::vector<ParseTree> export_corpus(const std::vector<NamedDoc>& docs, CorpusBranching branching) {
  std::vector<Branching> passes;
  if (branching != CorpusBranching::Right) passes.push_back(Branching::Left);
  if (branching != CorpusBranching::Left) passes.push_back(Branching::Right);

  std::vector<ParseTree> out;
  std::vector<DocFailure> failures;
  for (const Branching b : passes) {
    for (const auto& d : docs) {
      try {
        out.push_back(export_tree(d.doc, b));
      } catch (const ExportError& e) {
        // Failures do not depend on the branching direction; report once.
        if (b == passes.front()) failures.push_back({d.name, e.what()});
      }
    }
  }
  if (!failures.empty()) throw CorpusError(std::move(failures));
  return out;
}

}  // namespace causality
