#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "causality/label.hpp"
#include "causality/parse_tree.hpp"

namespace causality {

// A text-bound brat annotation. Offsets are the character offsets of the
// .ann file; token_begin/token_end is the aligned token range (end exclusive).
struct SpanAnnotation {
  std::string id;
  Label label = Label::Word;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  int token_begin = 0;
  int token_end = 0;
};

struct StandoffDoc {
  std::string sentence_text;
  std::vector<TokenSpan> tokens;
  std::vector<SpanAnnotation> spans;

  std::vector<Token> words() const;
};

class StandoffError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedLine,
    UnknownLabel,
    SurfaceMismatch,
    PartialOverlap,
    DuplicateSpan,
    AutomaticLabelInInput,
    TokenMisaligned,
  };

  StandoffError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Reads `T<id>\t<Label> <start> <end>\t<surface>` lines. Relations, events,
// attributes and notes are skipped.
StandoffDoc parse_standoff(std::string_view ann_text, std::string_view sentence_text);

enum class Branching { Left, Right };
enum class CorpusBranching { Left, Right, Both };

class ExportError : public std::runtime_error {
 public:
  enum class Kind { UncoveredToken, NoFinalPunct, PartialOverlap, InvalidRoot, SchemaViolation };

  ExportError(Kind kind, int token, const std::string& detail);
  Kind kind() const { return kind_; }
  int token() const { return token_; }

 private:
  Kind kind_;
  int token_;
};

// Rebuilds the binary tree of an annotated sentence:
//  - single-token segments label their leaf directly, other tokens become
//    Word / Punct / Symbol leaves;
//  - RootSentence covers the sentence, and a Sentence node covers everything
//    before the final punctuation unless an annotation already does;
//  - a segment with more than two children that contains a separator
//    (, : ;) pairs each child with the separator after it, labeling the pair
//    Separated<child> where that label exists (the segment's own label
//    otherwise, and always inside Sentence/RootSentence); the pairs are then
//    joined right-nested under the segment's label;
//  - any other segment with more than two children cascades copies of its
//    own label in the branching direction.
ParseTree export_tree(const StandoffDoc& doc, Branching branching);

struct NamedDoc {
  std::string name;
  StandoffDoc doc;
};

struct DocFailure {
  std::string name;
  std::string message;
};

class CorpusError : public std::runtime_error {
 public:
  explicit CorpusError(std::vector<DocFailure> failures);
  const std::vector<DocFailure>& failures() const { return failures_; }

 private:
  std::vector<DocFailure> failures_;
};

// Both = every Left export followed by every Right export, in input order.
std::vector<ParseTree> export_corpus(const std::vector<NamedDoc>& docs, CorpusBranching branching);

// Loads every <name>.txt / <name>.ann pair of a directory, sorted by name.
// Throws CorpusError listing every pair that failed to load.
std::vector<NamedDoc> load_standoff_dir(const std::filesystem::path& dir);
NamedDoc load_standoff_pair(const std::filesystem::path& txt, const std::filesystem::path& ann);

}  // namespace causality
