#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace causality {

// Segment categories of the causality treebank. The numeric value is the ID
// written in bracketed treebank files and never changes.
enum class Label : std::uint8_t {
  RootSentence = 1,
  Symbol = 2,
  Punct = 3,
  And = 4,
  Or = 5,
  KeyC = 6,
  KeyNC = 7,
  Condition = 8,
  Variable = 9,
  Statement = 10,
  Cause = 11,
  Effect = 12,
  CauseEffectRelation = 13,
  SeparatedCause = 14,
  Insertion = 15,
  Negation = 16,
  NonCausal = 17,
  SeparatedStatement = 18,
  SeparatedAnd = 19,
  Sentence = 20,
  SeparatedCauseEffectRelation = 21,
  SeparatedNegation = 22,
  Word = 23,
  SeparatedNonCausal = 24,
  SeparatedOr = 25,
  SeparatedEffect = 26,
  SeparatedVariable = 27,
};

inline constexpr int kLabelCount = 27;

struct LabelInfo {
  Label label;
  std::string_view name;
  bool automatic;  // assigned by the exporter, never by annotators
};

// All labels in ID order.
const std::array<LabelInfo, kLabelCount>& label_table();

constexpr int label_id(Label l) { return static_cast<int>(l); }
// 0-based row of the label in classifier outputs.
constexpr int label_index(Label l) { return static_cast<int>(l) - 1; }
constexpr Label label_from_index(int index) { return static_cast<Label>(index + 1); }

std::optional<Label> label_from_id(int id);
std::string_view label_name(Label l);

// Accepts the canonical name and common spellings ("Key-C", "KeyC",
// "Non-causal", "NonCausal", "Cause_Effect_Relation", ...).
std::optional<Label> label_from_name(std::string_view name);

bool is_automatic(Label l);

// Word, Punct and Symbol.
bool is_leaf_only(Label l);

// Labels that may sit on a single token: the leaf-only labels plus the
// manual labels annotators attach to one-token segments, e.g.
// `(6 when)`, `(9 SEP)`, `(8 unused)`).
bool allowed_on_leaf(Label l);

// Separated counterpart of a segment label, if the label set has one.
std::optional<Label> separated_variant(Label l);

}  // namespace causality
