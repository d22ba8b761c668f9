#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "causality/brat.hpp"

namespace causality {

namespace {

const char* kind_name(StandoffError::Kind kind) {
  switch (kind) {
    case StandoffError::Kind::MalformedLine: return "MalformedLine";
    case StandoffError::Kind::UnknownLabel: return "UnknownLabel";
    case StandoffError::Kind::SurfaceMismatch: return "SurfaceMismatch";
    case StandoffError::Kind::PartialOverlap: return "PartialOverlap";
    case StandoffError::Kind::DuplicateSpan: return "DuplicateSpan";
    case StandoffError::Kind::AutomaticLabelInInput: return "AutomaticLabelInInput";
    case StandoffError::Kind::TokenMisaligned: return "TokenMisaligned";
  }
  return "?";
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  while (true) {
    const auto e = s.find(sep, b);
    out.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

// brat offsets count Unicode code points; map each to its byte offset.
std::vector<std::size_t> codepoint_offsets(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(text.size());
  return out;
}

std::string_view strip_newlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

StandoffError::StandoffError(Kind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

std::vector<Token> StandoffDoc::words() const {
  std::vector<Token> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back(Token{tokens[i].text, static_cast<int>(i)});
  return out;
}

StandoffDoc parse_standoff(std::string_view ann_text, std::string_view sentence_text) {
  using Kind = StandoffError::Kind;
  StandoffDoc doc;
  doc.sentence_text = std::string(strip_newlines(sentence_text));
  doc.tokens = tokenize(doc.sentence_text);
  const auto cp = codepoint_offsets(doc.sentence_text);
  const std::size_t length = cp.size() - 1;

  std::vector<std::pair<std::size_t, std::size_t>> bytes;  // byte range per span
  int line_no = 0;
  for (auto line : split(ann_text, '\n')) {
    ++line_no;
    line = strip_newlines(line);
    if (line.empty() || line.front() != 'T') continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 3) throw StandoffError(Kind::MalformedLine, "line " + std::to_string(line_no));
    const auto head = split(fields[1], ' ');
    SpanAnnotation span;
    span.id = std::string(fields[0]);
    if (head.size() != 3 || !parse_size(head[1], span.start) || !parse_size(head[2], span.end) ||
        span.start >= span.end || span.end > length) {
      throw StandoffError(Kind::MalformedLine, "line " + std::to_string(line_no));
    }
    const auto label = label_from_name(head[0]);
    if (!label) throw StandoffError(Kind::UnknownLabel, span.id + " uses '" + std::string(head[0]) + "'");
    if (is_automatic(*label)) throw StandoffError(Kind::AutomaticLabelInInput, span.id);
    span.label = *label;
    span.surface = std::string(fields[2]);
    const std::size_t b = cp[span.start], e = cp[span.end];
    if (doc.sentence_text.compare(b, e - b, span.surface) != 0 || span.surface.size() != e - b)
      throw StandoffError(Kind::SurfaceMismatch, span.id);
    doc.spans.push_back(std::move(span));
    bytes.emplace_back(b, e);
  }

  for (std::size_t i = 0; i < doc.spans.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.spans.size(); ++j) {
      const auto [ab, ae] = bytes[i];
      const auto [bb, be] = bytes[j];
      if (ab == bb && ae == be)
        throw StandoffError(Kind::DuplicateSpan, doc.spans[i].id + " and " + doc.spans[j].id);
      const bool disjoint = ae <= bb || be <= ab;
      const bool nested = (ab <= bb && be <= ae) || (bb <= ab && ae <= be);
      if (!disjoint && !nested)
        throw StandoffError(Kind::PartialOverlap, doc.spans[i].id + " and " + doc.spans[j].id);
    }
  }

  for (std::size_t i = 0; i < doc.spans.size(); ++i) {
    const auto [b, e] = bytes[i];
    auto first = std::find_if(doc.tokens.begin(), doc.tokens.end(), [&](const TokenSpan& t) { return t.begin == b; });
    auto last = std::find_if(doc.tokens.begin(), doc.tokens.end(), [&](const TokenSpan& t) { return t.end == e; });
    if (first == doc.tokens.end() || last == doc.tokens.end() || last < first)
      throw StandoffError(Kind::TokenMisaligned, doc.spans[i].id);
    doc.spans[i].token_begin = static_cast<int>(first - doc.tokens.begin());
    doc.spans[i].token_end = static_cast<int>(last - doc.tokens.begin()) + 1;
  }
  return doc;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

NamedDoc load_standoff_pair(const std::filesystem::path& txt, const std::filesystem::path& ann) {
  return NamedDoc{txt.stem().string(), parse_standoff(read_file(ann), read_file(txt))};
}

std::vector<NamedDoc> load_standoff_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> anns;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ann") anns.push_back(entry.path());
  }
  std::sort(anns.begin(), anns.end());

  std::vector<NamedDoc> docs;
  std::vector<DocFailure> failures;
  for (const auto& ann : anns) {
    auto txt = ann;
    txt.replace_extension(".txt");
    if (!fs::exists(txt)) continue;
    try {
      docs.push_back(load_standoff_pair(txt, ann));
    } catch (const std::exception& e) {
      failures.push_back({ann.stem().string(), e.what()});
    }
  }
  if (!failures.empty()) throw CorpusError(std::move(failures));
  return docs;
}

}  // namespace causality
