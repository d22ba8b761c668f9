#include "causality/label.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace causality {

const std::array<LabelInfo, kLabelCount>& label_table() {
  static const std::array<LabelInfo, kLabelCount> table{{
      {Label::RootSentence, "RootSentence", false},
      {Label::Symbol, "Symbol", true},
      {Label::Punct, "Punct", true},
      {Label::And, "And", false},
      {Label::Or, "Or", false},
      {Label::KeyC, "Key-C", false},
      {Label::KeyNC, "Key-NC", false},
      {Label::Condition, "Condition", false},
      {Label::Variable, "Variable", false},
      {Label::Statement, "Statement", false},
      {Label::Cause, "Cause", false},
      {Label::Effect, "Effect", false},
      {Label::CauseEffectRelation, "CauseEffectRelation", false},
      {Label::SeparatedCause, "SeparatedCause", true},
      {Label::Insertion, "Insertion", false},
      {Label::Negation, "Negation", false},
      {Label::NonCausal, "Non-causal", false},
      {Label::SeparatedStatement, "SeparatedStatement", true},
      {Label::SeparatedAnd, "SeparatedAnd", true},
      {Label::Sentence, "Sentence", false},
      {Label::SeparatedCauseEffectRelation, "SeparatedCauseEffectRelation", true},
      {Label::SeparatedNegation, "SeparatedNegation", true},
      {Label::Word, "Word", true},
      {Label::SeparatedNonCausal, "SeparatedNonCausal", true},
      {Label::SeparatedOr, "SeparatedOr", true},
      {Label::SeparatedEffect, "SeparatedEffect", true},
      {Label::SeparatedVariable, "SeparatedVariable", true},
  }};
  return table;
}

std::optional<Label> label_from_id(int id) {
  if (id < 1 || id > kLabelCount) return std::nullopt;
  return static_cast<Label>(id);
}

std::string_view label_name(Label l) { return label_table()[label_index(l)].name; }

namespace {

std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  // Annotation configs in the wild also spell it "Seperated".
  if (out.rfind("seperated", 0) == 0) out.replace(0, 9, "separated");
  return out;
}

}  // namespace

std::optional<Label> label_from_name(std::string_view name) {
  const std::string key = fold(name);
  if (key.empty()) return std::nullopt;
  for (const auto& info : label_table()) {
    if (fold(info.name) == key) return info.label;
  }
  return std::nullopt;
}

bool is_automatic(Label l) { return label_table()[label_index(l)].automatic; }

bool is_leaf_only(Label l) {
  return l == Label::Word || l == Label::Punct || l == Label::Symbol;
}

bool allowed_on_leaf(Label l) {
  switch (l) {
    case Label::Word:
    case Label::Punct:
    case Label::Symbol:
    case Label::Variable:
    case Label::Condition:
    case Label::Negation:
    case Label::KeyC:
    case Label::KeyNC:
    case Label::NonCausal:
    case Label::Insertion:
      return true;
    default:
      return false;
  }
}

std::optional<Label> separated_variant(Label l) {
  switch (l) {
    case Label::Cause: return Label::SeparatedCause;
    case Label::Statement: return Label::SeparatedStatement;
    case Label::And: return Label::SeparatedAnd;
    case Label::CauseEffectRelation: return Label::SeparatedCauseEffectRelation;
    case Label::Negation: return Label::SeparatedNegation;
    case Label::NonCausal: return Label::SeparatedNonCausal;
    case Label::Or: return Label::SeparatedOr;
    case Label::Effect: return Label::SeparatedEffect;
    case Label::Variable: return Label::SeparatedVariable;
    default: return std::nullopt;
  }
}

}  // namespace causality
