#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "causality/cli.hpp"
#include "causality/trainer.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

// After Eigen: <resolv.h> defines _res.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

using namespace causality;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("causality-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

void copy_pair(const std::string& name, const fs::path& dir) {
  fs::create_directories(dir);
  for (const char* ext : {".txt", ".ann"})
    fs::copy_file(fixtures::data_path("table2/" + name + ext), dir / (name + ext), fs::copy_options::overwrite_existing);
}

void write_synthetic(const std::string& path, std::uint64_t seed, int n) {
  synthetic::RequirementGenerator g(seed);
  std::ofstream f(path);
  write_treebank(f, export_corpus(g.corpus(n), CorpusBranching::Left));
}

int lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"stats", "x.txt", "--bogus"}).code == 2);
  CHECK(cli({"train", "t.txt", "-o", "m", "--embedding", "pos60"}).code == 2);
  const auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("export") != std::string::npos);
}

TEST_CASE("export REQ 1") {
  TempDir tmp;
  copy_pair("req1", tmp.path() / "ann");
  auto r = cli({"export", tmp / "ann", "-o", tmp / "left.txt"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("branching=left") != std::string::npos);
  CHECK(slurp(tmp / "left.txt") == serialize_bracketed(parse_bracketed(fixtures::kReq1Left)) + "\n");

  r = cli({"export", tmp / "ann", "-o", "-", "--branching", "right"});
  REQUIRE(r.code == 0);
  CHECK(r.out == serialize_bracketed(parse_bracketed(fixtures::kReq1Right)) + "\n");

  copy_pair("s1", tmp.path() / "ann");
  copy_pair("s2", tmp.path() / "ann");
  r = cli({"export", tmp / "ann", "-o", "-", "--branching", "both"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 6);
}

TEST_CASE("export failures") {
  TempDir tmp;
  fs::create_directories(tmp.path() / "empty");
  auto r = cli({"export", tmp / "empty", "-o", tmp / "out.txt"});
  CHECK(r.code == 1);
  CHECK(r.err.find("no annotation pairs found") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp / "out.txt"));

  copy_pair("s1", tmp.path() / "bad");
  spit(tmp / "bad/broken.txt", "A is true .");
  spit(tmp / "bad/broken.ann", "T1\tCause 0 4\tA is\n");
  r = cli({"export", tmp / "bad", "-o", tmp / "out.txt"});
  CHECK(r.code == 1);
  CHECK(r.err.find("broken") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp / "out.txt"));
}

TEST_CASE("stats") {
  TempDir tmp;
  write_synthetic(tmp / "tb.txt", 3, 30);
  auto r = cli({"stats", tmp / "tb.txt", "--split", "--report", tmp / "stats.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("segments") != std::string::npos);
  CHECK(r.out.find("RootSentence") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(tmp / "stats.json"));
  REQUIRE(j.at("columns").size() == 4);
  CHECK(j["columns"][0]["sentences"] == 30);
  CHECK(j["columns"][0]["counts"]["RootSentence"] == 30);
  CHECK(j["columns"][1]["name"] == "train");
  CHECK(j["columns"][1]["sentences"].get<int>() + j["columns"][2]["sentences"].get<int>() +
            j["columns"][3]["sentences"].get<int>() ==
        30);

  spit(tmp / "noroot.txt", "(10 (9 A) (8 fails))\n");
  r = cli({"stats", tmp / "noroot.txt"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("train defaults are logged") {
  TempDir tmp;
  write_synthetic(tmp / "tb.txt", 1, 4);
  const auto r = cli({"train", tmp / "tb.txt", "--val", tmp / "tb.txt", "-o", tmp / "m.ckpt", "--epochs", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("lr=0.001 mb=24 dim=60 epochs=1") != std::string::npos);
  CHECK(r.err.find("seed=1") != std::string::npos);
  const auto log = slurp(tmp / "m.ckpt.log");
  CHECK(log.rfind("# lr=0.001 mb=24 dim=60 epochs=1 eps=1e-08 seed=1", 0) == 0);
  const auto ckpt = load_checkpoint(tmp / "m.ckpt");
  CHECK(ckpt.params.d == 60);
  CHECK(ckpt.meta.lr == 0.001);
  CHECK(ckpt.meta.mini_batch == 24);
  CHECK(TrainConfig{}.epochs == 90);
}

TEST_CASE("train is deterministic under a fixed seed") {
  TempDir tmp;
  write_synthetic(tmp / "tb.txt", 2, 20);
  const std::vector<std::string> base = {"train", tmp / "tb.txt", "--epochs", "3", "--dim", "8", "--seed", "5"};
  auto a = base;
  a.insert(a.end(), {"-o", tmp / "a.ckpt", "--test-out", tmp / "test.txt"});
  auto b = base;
  b.insert(b.end(), {"-o", tmp / "b.ckpt"});
  REQUIRE(cli(a).code == 0);
  REQUIRE(cli(b).code == 0);
  CHECK(slurp(tmp / "a.ckpt.log") == slurp(tmp / "b.ckpt.log"));
  CHECK(slurp(tmp / "a.ckpt") == slurp(tmp / "b.ckpt"));
  CHECK(slurp(tmp / "a.ckpt.log").find("# train=16 val=2") != std::string::npos);
  CHECK(read_treebank_file(tmp / "test.txt").size() == 2);
}

TEST_CASE("train reports the bad treebank line") {
  TempDir tmp;
  std::string text;
  for (int i = 0; i < 6; ++i) text += "(1 (23 ok) (3 .))\n";
  text += "(1 (23 broken) (3 .)\n";
  spit(tmp / "tb.txt", text);
  const auto r = cli({"train", tmp / "tb.txt", "-o", tmp / "m.ckpt"});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 7") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp / "m.ckpt"));
}

TEST_CASE("train rejects an invalid config") {
  TempDir tmp;
  write_synthetic(tmp / "tb.txt", 2, 5);
  CHECK(cli({"train", tmp / "tb.txt", "-o", tmp / "m", "--mb", "20", "--grid"}).code == 1);
  CHECK(cli({"train", tmp / "tb.txt", "-o", tmp / "m", "--embedding", "pos50"}).code == 1);
}

TEST_CASE("predict") {
  TempDir tmp;
  copy_pair("req1", tmp.path() / "ann");
  REQUIRE(cli({"export", tmp / "ann", "-o", tmp / "req1.txt"}).code == 0);
  REQUIRE(cli({"train", tmp / "req1.txt", "--val", tmp / "req1.txt", "-o", tmp / "m.ckpt", "--epochs", "100", "--dim",
               "10", "--lr", "0.01"})
              .code == 0);
  spit(tmp / "in.txt", "If A is true and B is false , then C shall occur .\n\nx\nIf the admin is away , then nothing happens .\n");
  const auto r = cli({"predict", tmp / "m.ckpt", tmp / "in.txt"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("line 2") != std::string::npos);
  std::istringstream out(r.out);
  std::vector<ParseTree> trees = read_treebank(out);
  REQUIRE(trees.size() == 3);
  CHECK(trees[0].words() == parse_bracketed(fixtures::kReq1Left).words());
  CHECK(trees[0].node_count() == parse_bracketed(fixtures::kReq1Left).node_count());
  CHECK(trees[1].is_leaf());
  CHECK(trees[1].word() == "x");
  CHECK(r.out.find("\n(" + std::to_string(label_id(trees[1].label())) + " x)\n") != std::string::npos);
  CHECK(trees[2].leaf_count() == 10);

  CHECK(cli({"predict", tmp / "missing.ckpt", tmp / "in.txt"}).code == 1);
  spit(tmp / "junk.ckpt", "not a checkpoint");
  CHECK(cli({"predict", tmp / "junk.ckpt", tmp / "in.txt"}).code == 1);
}

TEST_CASE("eval") {
  TempDir tmp;
  write_synthetic(tmp / "tb.txt", 6, 10);
  auto r = cli({"eval", tmp / "tb.txt", "--predicted", tmp / "tb.txt", "--report", tmp / "r.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("accuracy 100.00%") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(tmp / "r.json"));
  CHECK(j["mean"]["f1"] == 1.0);
  CHECK(j["node_accuracy"] == 1.0);

  REQUIRE(cli({"train", tmp / "tb.txt", "--val", tmp / "tb.txt", "-o", tmp / "m.ckpt", "--epochs", "1", "--dim", "6"}).code == 0);
  r = cli({"eval", tmp / "m.ckpt", tmp / "tb.txt"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Mean") != std::string::npos);
  CHECK(r.out.find("cumulative_accuracy") != std::string::npos);

  write_synthetic(tmp / "other.txt", 7, 10);
  CHECK(cli({"eval", tmp / "tb.txt", "--predicted", tmp / "other.txt"}).code == 1);
  CHECK(cli({"eval", tmp / "tb.txt"}).code == 2);
}

TEST_CASE("agreement") {
  TempDir tmp;
  copy_pair("req1", tmp.path() / "alice");
  copy_pair("s1", tmp.path() / "alice");
  copy_pair("req1", tmp.path() / "bob");
  auto r = cli({"agreement", tmp / "alice", tmp / "bob", "--report", tmp / "a.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("average F1 1.00") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(tmp / "a.json"));
  CHECK(j["raters"] == std::vector<std::string>{"alice", "bob"});

  r = cli({"agreement", tmp / "alice"});
  CHECK(r.code == 1);

  copy_pair("s2", tmp.path() / "carol");
  CHECK(cli({"agreement", tmp / "alice", tmp / "carol"}).code == 1);
}

TEST_CASE("fetch-data from a local server") {
  const std::string payload = "(1 (23 ok) (3 .))\n";
  httplib::Server server;
  server.Get("/data/treebank.txt", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(payload, "text/plain");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir tmp;
  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/data/treebank.txt";
  const std::string good = "8b1a9953c4611296a827abf8c47804d7e6c49c6b1e9b2d4c9f8d7c4e5f8a4e1f";
  auto r = cli({"fetch-data", "--url", url, "--dir", tmp / "cache"});
  CHECK(r.code == 0);
  CHECK(r.err.find("no checksum pinned") != std::string::npos);
  const auto pos = r.err.find("sha256 of the download is ");
  REQUIRE(pos != std::string::npos);
  const std::string digest = r.err.substr(pos + 26, 64);
  CHECK(slurp(tmp / "cache/treebank.txt") == payload);
  CHECK(r.out == tmp / "cache/treebank.txt" + "\n");

  r = cli({"fetch-data", "--url", url, "--dir", tmp / "pinned", "--sha256", digest});
  CHECK(r.code == 0);
  CHECK(r.err.find("no checksum pinned") == std::string::npos);

  r = cli({"fetch-data", "--url", url, "--dir", tmp / "bad", "--sha256", good});
  CHECK(r.code == 1);
  CHECK(r.err.find("checksum mismatch") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp / "bad/treebank.txt"));

  CHECK(cli({"fetch-data", "--url", "http://127.0.0.1:" + std::to_string(port) + "/nope", "--dir", tmp / "x"}).code == 1);
  server.stop();
  thread.join();
}
