#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "causality/rntn.hpp"

namespace causality {

namespace {

constexpr char kMagic[8] = {'C', 'A', 'U', 'S', 'R', 'N', 'T', 'N'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(int v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  void mat(const Eigen::MatrixXd& m) {
    u32(static_cast<std::uint32_t>(m.rows()));
    u32(static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) f64(m.data()[i]);
  }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& s, std::size_t end) : s_(s), end_(end) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(s_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  int i32() { return static_cast<int>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const auto n = u32();
    need(n);
    std::string out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  Eigen::MatrixXd mat() {
    const auto rows = u32();
    const auto cols = u32();
    need(static_cast<std::size_t>(rows) * cols * 8);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = f64();
    return m;
  }
  bool done() const { return pos_ == end_; }

 private:
  void need(std::size_t n) const {
    if (end_ - pos_ < n) throw CheckpointError(CheckpointError::Kind::CorruptChecksum, "truncated checkpoint");
  }

  const std::string& s_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t checksum(const std::string& s, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(n)));
}

const char* kind_name(CheckpointError::Kind k) {
  switch (k) {
    case CheckpointError::Kind::VersionMismatch: return "VersionMismatch";
    case CheckpointError::Kind::CorruptChecksum: return "CorruptChecksum";
    case CheckpointError::Kind::Io: return "Io";
  }
  return "?";
}

void write_grads(Writer& w, const Gradients& g) {
  w.mat(g.V);
  w.mat(g.W);
  w.mat(g.C);
  w.mat(g.E);
}

Gradients read_grads(Reader& r) {
  Gradients g;
  g.V = r.mat();
  g.W = r.mat();
  g.C = r.mat();
  g.E = r.mat();
  return g;
}

bool same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }

}  // namespace

CheckpointError::CheckpointError(Kind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  const auto& p = ckpt.params;
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.i32(p.d);
  w.i32(p.labels());
  w.u8(static_cast<std::uint8_t>(p.embeddings.kind));
  w.u8(p.embeddings.trainable ? 1 : 0);
  w.i32(p.embeddings.weighting.pos_dims);
  w.i32(p.embeddings.weighting.pretrained_dims);
  w.u32(static_cast<std::uint32_t>(p.embeddings.vocab.size()));
  for (const auto& word : p.embeddings.vocab.words()) w.str(word);
  w.mat(p.V);
  w.mat(p.W);
  w.mat(p.C);
  w.mat(p.embeddings.vectors);
  write_grads(w, ckpt.state.acc);
  const auto& m = ckpt.meta;
  w.f64(m.lr);
  w.f64(m.eps);
  w.i32(m.mini_batch);
  w.i32(m.epochs);
  w.u64(m.seed);
  w.i32(m.epoch);
  w.f64(m.val_accuracy);
  w.str(m.config);
  const auto crc = checksum(w.bytes(), w.bytes().size());
  w.u32(crc);
  return std::move(w.bytes());
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  using K = CheckpointError::Kind;
  if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw CheckpointError(K::VersionMismatch, "not a checkpoint file");
  Reader head(bytes, bytes.size());
  for (std::size_t i = 0; i < sizeof kMagic; ++i) head.u8();
  const auto version = head.u32();
  if (version != kVersion)
    throw CheckpointError(K::VersionMismatch, "format version " + std::to_string(version) + ", expected " +
                                                  std::to_string(kVersion));
  const std::size_t body = bytes.size() - 4;
  Reader tail(bytes, bytes.size());
  for (std::size_t i = 0; i < body; ++i) tail.u8();
  if (tail.u32() != checksum(bytes, body)) throw CheckpointError(K::CorruptChecksum, "checksum mismatch");

  Reader r(bytes, body);
  for (std::size_t i = 0; i < sizeof kMagic; ++i) r.u8();
  r.u32();
  Checkpoint c;
  auto& p = c.params;
  p.d = r.i32();
  const int labels = r.i32();
  p.embeddings.kind = static_cast<EmbeddingKind>(r.u8());
  p.embeddings.trainable = r.u8() != 0;
  p.embeddings.weighting.pos_dims = r.i32();
  p.embeddings.weighting.pretrained_dims = r.i32();
  const auto vocab_size = r.u32();
  std::vector<std::string> words;
  for (std::uint32_t i = 0; i < vocab_size; ++i) words.push_back(r.str());
  if (words.empty() || words.front() != Vocab::kUnk) throw CheckpointError(K::CorruptChecksum, "vocabulary lacks <unk>");
  p.embeddings.vocab = Vocab(std::vector<std::string>(words.begin() + 1, words.end()));
  p.V = r.mat();
  p.W = r.mat();
  p.C = r.mat();
  p.embeddings.vectors = r.mat();
  c.state.acc = read_grads(r);
  auto& m = c.meta;
  m.lr = r.f64();
  m.eps = r.f64();
  m.mini_batch = r.i32();
  m.epochs = r.i32();
  m.seed = r.u64();
  m.epoch = r.i32();
  m.val_accuracy = r.f64();
  m.config = r.str();
  if (!r.done()) throw CheckpointError(K::CorruptChecksum, "trailing bytes");

  const int d = p.d;
  const bool ok = d > 0 && p.V.rows() == 2 * d && p.V.cols() == 2 * d * d && p.W.rows() == d && p.W.cols() == 2 * d &&
                  p.C.rows() == labels && p.C.cols() == d && p.embeddings.vectors.rows() == d &&
                  p.embeddings.vectors.cols() == p.embeddings.vocab.size() && same_shape(c.state.acc.V, p.V) &&
                  same_shape(c.state.acc.W, p.W) && same_shape(c.state.acc.C, p.C) &&
                  same_shape(c.state.acc.E, p.embeddings.vectors);
  if (!ok) throw CheckpointError(K::CorruptChecksum, "inconsistent tensor shapes");
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError(CheckpointError::Kind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError(CheckpointError::Kind::Io, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointError::Kind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str());
}

}  // namespace causality
