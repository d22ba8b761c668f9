#include "causality/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "causality/brat.hpp"
#include "causality/trainer.hpp"

#ifdef CAUSALITY_HAVE_FETCH
#include "fetch.hpp"
#endif

namespace causality {

namespace fs = std::filesystem;

namespace {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw DataError("cannot write " + path.string());
    }
  }
  fs::rename(tmp, path);
}

std::vector<ParseTree> read_trees(const std::string& path) {
  if (!fs::exists(path)) throw DataError("no such file: " + path);
  try {
    return read_treebank_file(path);
  } catch (const TreebankError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<std::vector<PosTag>> read_tags(const std::string& path, const std::vector<ParseTree>& trees) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  return align_sidecar(trees, read_pos_sidecar(in));
}

std::optional<CorpusBranching> branching_from(const std::string& s) {
  if (s == "left") return CorpusBranching::Left;
  if (s == "right") return CorpusBranching::Right;
  if (s == "both") return CorpusBranching::Both;
  return std::nullopt;
}

ScoreMode score_from(const std::string& s) { return s == "mass" ? ScoreMode::SegmentMass : ScoreMode::MaxProbability; }

std::string stats_json(const std::vector<std::pair<std::string, TreebankStats>>& columns) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [name, st] : columns) {
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (int l = 0; l < kLabelCount; ++l)
      counts[std::string(label_name(label_from_index(l)))] = st.counts[static_cast<std::size_t>(l)];
    j.push_back({{"name", name},
                 {"sentences", st.sentences},
                 {"segments", st.segments},
                 {"root_count_matches", st.root_count_matches},
                 {"counts", counts}});
  }
  return nlohmann::ordered_json{{"columns", j}}.dump(2) + "\n";
}

std::string agreement_json(const AgreementReport& r) {
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (int l = 0; l < kLabelCount; ++l)
    if (const auto& v = r.per_label_f1[static_cast<std::size_t>(l)]) per[std::string(label_name(label_from_index(l)))] = *v;
  nlohmann::ordered_json j{{"raters", r.raters}, {"pairwise_f1", r.pairwise_f1}, {"average_f1", r.average_f1},
                           {"per_label_f1", per}};
  return j.dump(2) + "\n";
}

std::string rater_name(const std::string& dir) {
  fs::path p(dir);
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

fs::path default_cache_dir() {
  if (const char* d = std::getenv("CAUSALITY_DATA_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "causality";
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "causality";
  return fs::current_path() / ".causality-data";
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causality treebank tools: export, statistics, training and evaluation", "causality"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  bool verbose = false;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_flag("-v,--verbose", verbose, "Per-epoch progress and extra diagnostics");

  // export
  std::string ann_dir, export_out, branching = "left";
  auto* exp = app.add_subcommand("export", "Convert a directory of brat .txt/.ann pairs to a bracketed treebank");
  exp->add_option("ann_dir", ann_dir, "Directory of annotation pairs")->required();
  exp->add_option("-o,--out", export_out, "Output treebank ('-' for stdout)")->required();
  exp->add_option("--branching", branching, "left, right or both")
      ->check(CLI::IsMember({"left", "right", "both"}))
      ->capture_default_str();

  // stats
  std::vector<std::string> stats_files;
  bool stats_split = false;
  std::string stats_report;
  auto* stats = app.add_subcommand("stats", "Segment counts per label");
  stats->add_option("treebank", stats_files, "Treebank files, one column each")->required();
  stats->add_flag("--split", stats_split, "Also show the default train/val/test split of the first file");
  stats->add_option("--report", stats_report, "Write a JSON report");

  // train
  TrainConfig cfg;
  std::string train_file, val_file, ckpt_out, log_out, test_out, embedding = "random", vectors, pos_tags,
      train_branching = "left";
  int vectors_dim = 0;
  auto* tr = app.add_subcommand("train", "Train on a bracketed treebank");
  tr->add_option("treebank", train_file, "Training treebank")->required();
  tr->add_option("--val", val_file, "Validation treebank (default: split the training file)");
  tr->add_option("-o,--out", ckpt_out, "Checkpoint path")->required();
  tr->add_option("--log", log_out, "Epoch log path (default: <out>.log)");
  tr->add_option("--test-out", test_out, "Write the held-out test split here");
  tr->add_option("--lr", cfg.lr, "Learning rate")->capture_default_str();
  tr->add_option("--mb", cfg.mini_batch, "Mini-batch size")->capture_default_str();
  tr->add_option("--dim", cfg.wvec_dim, "Vector dimension")->capture_default_str();
  tr->add_option("--epochs", cfg.epochs, "Epochs")->capture_default_str();
  tr->add_option("--eps", cfg.eps, "AdaGrad epsilon")->capture_default_str();
  tr->add_option("--init-range", cfg.init_range, "Word vector init range r")->capture_default_str();
  tr->add_option("--embedding", embedding, "random, pos50, pos75 or pos100")
      ->check(CLI::IsMember({"random", "pos50", "pos75", "pos100"}))
      ->capture_default_str();
  tr->add_option("--vectors", vectors, "Pretrained word vectors (text format)");
  tr->add_option("--vectors-dim", vectors_dim, "Dimension of the pretrained vectors");
  tr->add_option("--pos-tags", pos_tags, "token<TAB>TAG sidecar for the training treebank");
  tr->add_option("--branching", train_branching, "Branching of the treebank, recorded in the log")
      ->check(CLI::IsMember({"left", "right", "both"}))
      ->capture_default_str();
  tr->add_flag("--grid", cfg.grid_mode, "Restrict lr, mb and dim to the tuning grid");

  // predict
  std::string predict_ckpt, predict_in = "-", score = "max";
  auto* pr = app.add_subcommand("predict", "Parse sentences, one per line, into bracketed trees");
  pr->add_option("checkpoint", predict_ckpt, "Model checkpoint")->required();
  pr->add_option("sentences", predict_in, "Sentence file ('-' for stdin)")->capture_default_str();
  pr->add_option("--score", score, "Merge score: max or mass")->check(CLI::IsMember({"max", "mass"}))->capture_default_str();

  // eval
  std::vector<std::string> eval_args;
  std::string predicted, eval_report, eval_tags;
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint (CHECKPOINT GOLD) or predictions (GOLD --predicted)");
  ev->add_option("inputs", eval_args, "[CHECKPOINT] GOLD")->required()->expected(1, 2);
  ev->add_option("--predicted", predicted, "Predicted treebank instead of a checkpoint");
  ev->add_option("--report", eval_report, "Write a JSON report");
  ev->add_option("--pos-tags", eval_tags, "token<TAB>TAG sidecar for the gold treebank");
  ev->add_option("--score", score, "Merge score: max or mass")->check(CLI::IsMember({"max", "mass"}))->capture_default_str();

  // agreement
  std::vector<std::string> rater_dirs;
  std::string agreement_report;
  auto* ag = app.add_subcommand("agreement", "Pairwise F1 between annotators, one directory per rater");
  ag->add_option("raters", rater_dirs, "Rater directories")->required();
  ag->add_option("--report", agreement_report, "Write a JSON report");

  // fetch-data
  std::string url, sha256, data_dir;
  auto* fe = app.add_subcommand("fetch-data", "Download the published treebank into the data cache");
  fe->add_option("--url", url, "Source URL (default: $CAUSALITY_DATA_URL)");
  fe->add_option("--sha256", sha256, "Expected SHA-256 (default: $CAUSALITY_DATA_SHA256)");
  fe->add_option("--dir", data_dir, "Cache directory (default: $CAUSALITY_DATA_DIR or ~/.cache/causality)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*exp) {
      err << "# export dir=" << ann_dir << " out=" << export_out << " branching=" << branching << " seed=" << seed
          << "\n";
      const auto docs = load_standoff_dir(ann_dir);
      if (docs.empty()) throw DataError("no annotation pairs found in " + ann_dir);
      const auto trees = export_corpus(docs, *branching_from(branching));
      std::ostringstream buf;
      write_treebank(buf, trees);
      if (export_out == "-") {
        out << buf.str();
      } else {
        write_file(export_out, buf.str());
      }
      err << "exported " << trees.size() << " tree(s) from " << docs.size() << " document(s)\n";
      return 0;
    }

    if (*stats) {
      err << "# stats files=" << stats_files.size() << " split=" << (stats_split ? "yes" : "no") << " seed=" << seed
          << "\n";
      std::vector<std::pair<std::string, TreebankStats>> columns;
      std::vector<ParseTree> first;
      for (const auto& f : stats_files) {
        auto trees = read_trees(f);
        columns.emplace_back(fs::path(f).filename().string(), treebank_stats(trees));
        if (first.empty()) first = std::move(trees);
      }
      if (stats_split) {
        SplitSpec spec;
        spec.seed = seed;
        const auto s = split_dataset(first, spec);
        columns.emplace_back("train", treebank_stats(s.train));
        columns.emplace_back("val", treebank_stats(s.val));
        columns.emplace_back("test", treebank_stats(s.test));
        err << "split tolerance " << s.tolerance << "\n";
      }
      out << format_stats(columns);
      for (const auto& [name, st] : columns)
        if (!st.root_count_matches)
          err << "warning: " << name << ": RootSentence count "
              << st.counts[static_cast<std::size_t>(label_index(Label::RootSentence))] << " differs from "
              << st.sentences << " sentences\n";
      if (!stats_report.empty()) write_file(stats_report, stats_json(columns));
      return 0;
    }

    if (*tr) {
      cfg.seed = seed;
      cfg.embedding = *embedding_mode_from_string(embedding);
      cfg.branching_data = *branching_from(train_branching);
      validate(cfg);
      err << "# train " << describe(cfg) << " treebank=" << train_file << "\n";

      Corpus all{read_trees(train_file), {}};
      if (!pos_tags.empty()) all.tags = read_tags(pos_tags, all.trees);
      Corpus train_set, val_set;
      if (!val_file.empty()) {
        train_set = std::move(all);
        val_set.trees = read_trees(val_file);
      } else {
        SplitSpec spec;
        spec.seed = seed;
        const auto idx = split_indices(all.trees, spec);
        auto take = [&](const std::vector<int>& ids) {
          Corpus c;
          for (int i : ids) {
            c.trees.push_back(all.trees[static_cast<std::size_t>(i)]);
            if (!all.tags.empty()) c.tags.push_back(all.tags[static_cast<std::size_t>(i)]);
          }
          return c;
        };
        train_set = take(idx.train);
        val_set = take(idx.val);
        const Corpus test_set = take(idx.test);
        err << "split train=" << train_set.trees.size() << " val=" << val_set.trees.size()
            << " test=" << test_set.trees.size() << " tolerance=" << idx.tolerance << "\n";
        if (!test_out.empty()) {
          std::ostringstream buf;
          write_treebank(buf, test_set.trees);
          write_file(test_out, buf.str());
        }
      }

      std::optional<EmbeddingTable> table;
      if (cfg.embedding != EmbeddingMode::Random) {
        std::optional<PretrainedLoad> pre;
        if (!vectors.empty()) {
          std::vector<ParseTree> trees = train_set.trees;
          trees.insert(trees.end(), val_set.trees.begin(), val_set.trees.end());
          const int dims = vectors_dim > 0 ? vectors_dim : pos_weighting(cfg.wvec_dim, pos_percent(cfg.embedding)).pretrained_dims;
          pre = load_pretrained(fs::path(vectors), vocab_from_trees(trees), dims);
          err << "pretrained vectors: " << pre->missing.size() << " word(s) missing\n";
        }
        table = make_embeddings(cfg, {&train_set, &val_set}, pre ? &pre->table : nullptr);
      }

      auto progress = [&](const EpochLog& e) {
        if (verbose) err << format_epoch(e) << "\n";
      };
      const auto result = train(train_set, val_set, cfg, std::move(table), progress);
      save_checkpoint(result.best, ckpt_out);
      write_file(log_out.empty() ? ckpt_out + ".log" : log_out, result.log_text);
      err << "best epoch " << result.best.meta.epoch << " val_acc " << result.best.meta.val_accuracy << "\n";
      return 0;
    }

    if (*pr) {
      err << "# predict checkpoint=" << predict_ckpt << " score=" << score << " seed=" << seed << "\n";
      const auto ckpt = load_checkpoint(predict_ckpt);
      const Composer composer(ckpt.params);
      std::ifstream file;
      if (predict_in != "-") {
        file.open(predict_in);
        if (!file) throw DataError("cannot read " + predict_in);
      }
      std::istream& in = predict_in == "-" ? std::cin : file;
      std::string line;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize_words(line);
        if (tokens.empty()) {
          err << "warning: line " << line_no << " is empty, skipped\n";
          continue;
        }
        std::vector<std::string> words;
        for (const auto& t : tokens) words.push_back(t.text);
        const auto rows = leaf_rows(words, ckpt.params.embeddings);
        out << serialize_bracketed(greedy_parse(words, rows, composer, score_from(score))) << "\n";
      }
      return 0;
    }

    if (*ev) {
      if (!predicted.empty() && eval_args.size() != 1) throw CLI::ValidationError("eval", "--predicted takes only GOLD");
      if (predicted.empty() && eval_args.size() != 2) throw CLI::ValidationError("eval", "need CHECKPOINT and GOLD");
      const std::string gold_file = eval_args.back();
      err << "# eval gold=" << gold_file << (predicted.empty() ? " checkpoint=" + eval_args.front() : " predicted=" + predicted)
          << " score=" << score << " seed=" << seed << "\n";
      Corpus gold{read_trees(gold_file), {}};
      if (!eval_tags.empty()) gold.tags = read_tags(eval_tags, gold.trees);
      EvalReport report;
      if (predicted.empty()) {
        const auto ckpt = load_checkpoint(eval_args.front());
        report = evaluate(ckpt.params, gold, score_from(score));
      } else {
        report = evaluate_predictions(gold.trees, read_trees(predicted));
      }
      out << format_report(report);
      out << "n\tcumulative_accuracy\n";
      for (const auto& [n, v] : report.cumulative_accuracy_by_ngram) out << n << '\t' << v << '\n';
      if (!eval_report.empty()) write_file(eval_report, report_json(report));
      return 0;
    }

    if (*ag) {
      err << "# agreement raters=" << rater_dirs.size() << " seed=" << seed << "\n";
      std::map<std::string, std::vector<NamedDoc>> docs;
      for (const auto& d : rater_dirs) {
        std::string name = rater_name(d);
        for (int k = 2; docs.count(name); ++k) name = rater_name(d) + "#" + std::to_string(k);
        docs[name] = load_standoff_dir(d);
      }
      const auto r = inter_annotator_agreement(docs);
      out << format_agreement(r);
      if (!agreement_report.empty()) write_file(agreement_report, agreement_json(r));
      return 0;
    }

    if (*fe) {
#ifdef CAUSALITY_HAVE_FETCH
      if (url.empty()) url = env_or("CAUSALITY_DATA_URL", "");
      if (sha256.empty()) sha256 = env_or("CAUSALITY_DATA_SHA256", "");
      const fs::path dir = data_dir.empty() ? default_cache_dir() : fs::path(data_dir);
      err << "# fetch-data url=" << url << " dir=" << dir.string() << " seed=" << seed << "\n";
      if (url.empty()) throw CLI::ValidationError("fetch-data", "no URL: pass --url or set CAUSALITY_DATA_URL");
      out << detail::fetch_url(url, sha256, dir, err).string() << "\n";
      return 0;
#else
      (void)default_cache_dir;
      (void)env_or;
      err << "error: built without fetch support\n";
      return 1;
#endif
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CorpusError& e) {
    for (const auto& f : e.failures()) err << "error: " << f.name << ": " << f.message << "\n";
    return 1;
  } catch (const TrainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace causality
