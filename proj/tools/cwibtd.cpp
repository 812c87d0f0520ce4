// Command-line driver: prepare, train, infer, benchmark, eval.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cwibtd/conet.hpp"
#include "cwibtd/error.hpp"
#include "cwibtd/metrics.hpp"
#include "cwibtd/model.hpp"
#include "cwibtd/pipeline.hpp"
#include "cwibtd/pseudodoc.hpp"

using namespace cwibtd;

namespace {

struct PreprocessFlags {
  std::string input;
  std::string format = "labeled";
  PreprocessConfig config;
  bool no_default_stopwords = false;
  std::vector<std::string> large_classes;
  std::vector<std::string> rare_subset;
  std::size_t per_large = 300;
  std::size_t per_rare = 20;

  void bind(CLI::App* app, bool input_required) {
    auto* in = app->add_option("--input", input, "Raw corpus file");
    if (input_required) in->required()->check(CLI::ExistingFile);
    app->add_option("--format", format, "labeled (class<TAB>text) or unlabeled")
        ->check(CLI::IsMember({"labeled", "unlabeled"}));
    app->add_option("--min-count", config.min_count, "Minimum corpus frequency")
        ->check(CLI::PositiveNumber);
    app->add_option("--stopwords", config.stopword_path,
                    "Extra stopword file, one word per line");
    app->add_flag("--no-default-stopwords", no_default_stopwords,
                  "Do not use the bundled English stopword list");
    app->add_option("--keep-chars", config.keep_chars,
                    "Punctuation characters kept inside tokens");
    app->add_option("--large-classes", large_classes,
                    "Classes taken with --per-large documents each")
        ->delimiter(',');
    app->add_option("--per-large", per_large, "Documents per large class");
    app->add_option("--subset-rare-classes", rare_subset,
                    "Classes taken with --per-rare documents each")
        ->delimiter(',');
    app->add_option("--per-rare", per_rare, "Documents per rare class");
  }

  std::optional<SubsetSpec> subset() const {
    if (large_classes.empty() && rare_subset.empty()) return std::nullopt;
    return SubsetSpec{large_classes, per_large, rare_subset, per_rare};
  }

  PreparedCorpus run() {
    config.use_default_stopwords = !no_default_stopwords;
    return prepare_corpus(input, parse_corpus_format(format), config, subset());
  }
};

struct HyperFlags {
  std::optional<std::size_t> topics;
  std::size_t iterations = 2000;
  std::size_t window = 10;
  std::string window_mode = "sliding";
  double scale = 10.0;

  void bind(CLI::App* app) {
    app->add_option("--topics,-k", topics,
                    "Number of topics (default: number of classes)");
    app->add_option("--iterations", iterations, "Gibbs sweeps")
        ->check(CLI::PositiveNumber);
    app->add_option("--window", window, "Sliding window length")
        ->check(CLI::Range(2, 1 << 20));
    app->add_option("--window-mode", window_mode, "sliding or document")
        ->check(CLI::IsMember({"sliding", "document"}));
    app->add_option("--scale", scale, "PMI-to-multiplicity scale (cwibtd)");
  }

  ModelParams params(ModelKind kind, const LabeledCorpus& corpus) const {
    std::size_t k = topics ? *topics : corpus.num_classes();
    if (k == 0) throw InvalidConfig("--topics is required for unlabeled corpora");
    auto p = ModelParams::defaults(kind, k);
    p.iterations = iterations;
    p.window = window;
    p.window_mode = parse_window_mode(window_mode);
    p.scale = scale;
    return p;
  }
};

void print_stats(std::ostream& out, const LabeledCorpus& corpus) {
  const auto s = corpus_stats(corpus);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", s.mean_length);
  out << "K=" << s.num_classes << " N=" << s.num_docs << " Len=" << buf << "/"
      << s.max_length << " V=" << s.vocab_size << " tokens=" << s.total_tokens
      << " empty=" << s.empty_docs << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

int run(int argc, char** argv) {
  CLI::App app{"Short-text topic models over word co-occurrence networks"};
  app.set_config("--config", "", "TOML/INI file supplying any flag");
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "Preprocess and encode a corpus");
  PreprocessFlags prep_flags;
  std::string prep_out;
  prep_flags.bind(prepare, true);
  prepare->add_option("--out,-o", prep_out, "Corpus artifact to write")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train one model");
  std::string train_corpus;
  std::string train_kind = "cwibtd";
  std::string train_out;
  std::optional<double> train_alpha;
  std::optional<double> train_beta;
  std::uint64_t train_seed = 1;
  std::string dump_network;
  std::string dump_pseudo;
  HyperFlags train_hyper;
  train_cmd->add_option("--corpus", train_corpus, "Corpus artifact")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--model,-m", train_kind, "lda, wntm or cwibtd")
      ->check(CLI::IsMember({"lda", "wntm", "cwibtd"}));
  train_cmd->add_option("--out,-o", train_out, "Model file to write")->required();
  train_cmd->add_option("--alpha", train_alpha, "Document-topic prior");
  train_cmd->add_option("--beta", train_beta, "Topic-word prior");
  train_cmd->add_option("--seed", train_seed, "RNG seed");
  train_cmd->add_option("--dump-network", dump_network,
                        "Write the (pruned, for cwibtd) network edge list");
  train_cmd->add_option("--dump-pseudo-docs", dump_pseudo,
                        "Write the pseudo-documents");
  train_hyper.bind(train_cmd);

  // infer
  auto* infer = app.add_subcommand("infer", "Assign topics to documents");
  std::string infer_model;
  std::string infer_corpus_path;
  std::string infer_input;
  std::string infer_format = "unlabeled";
  std::string infer_out;
  infer->add_option("--model,-m", infer_model, "Model file")
      ->required()->check(CLI::ExistingFile);
  infer->add_option("--corpus", infer_corpus_path,
                    "Corpus artifact the model was trained on")
      ->required()->check(CLI::ExistingFile);
  infer->add_option("--input", infer_input,
                    "Raw documents (default: the corpus artifact's documents)")
      ->check(CLI::ExistingFile);
  infer->add_option("--format", infer_format, "labeled or unlabeled")
      ->check(CLI::IsMember({"labeled", "unlabeled"}));
  infer->add_option("--out,-o", infer_out, "Output file (default: stdout)");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Train, evaluate and report");
  std::string bench_corpus;
  PreprocessFlags bench_prep;
  HyperFlags bench_hyper;
  std::vector<std::string> bench_models = {"lda", "wntm", "cwibtd"};
  std::map<std::string, std::optional<double>> priors = {
      {"lda-alpha", {}},  {"lda-beta", {}},    {"wntm-alpha", {}},
      {"wntm-beta", {}},  {"cwibtd-alpha", {}}, {"cwibtd-beta", {}}};
  BenchmarkPlan plan;
  std::optional<std::vector<std::string>> bench_rare;
  bench->add_option("--corpus", bench_corpus, "Corpus artifact")
      ->check(CLI::ExistingFile);
  bench_prep.bind(bench, false);
  bench_hyper.bind(bench);
  bench->add_option("--models", bench_models, "Models to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"lda", "wntm", "cwibtd"}));
  for (auto& [name, value] : priors) {
    bench->add_option("--" + name, value, "Override the " + name + " default");
  }
  bench->add_option("--runs", plan.runs, "Runs per model")->check(CLI::PositiveNumber);
  bench->add_option("--seed", plan.base_seed, "Seed of run 0; run i uses seed+i");
  bench->add_option("--rare-classes", bench_rare,
                    "Rare classes (default: the corpus subset's rare classes)")
      ->delimiter(',');
  bench->add_flag("--include-uncovered", plan.policy.include_uncovered,
                  "Score documents without topic signal");
  bench->add_option("--threads", plan.threads, "Parallel runs");
  bench->add_option("--out,-o", plan.output_dir, "Report directory");

  // eval
  auto* eval = app.add_subcommand("eval", "Purity and NMI of external label files");
  std::string eval_pred;
  std::string eval_truth;
  std::vector<std::string> eval_rare;
  eval->add_option("--pred", eval_pred, "Predicted cluster per line")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", eval_truth, "Gold class per line")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--rare-classes", eval_rare, "Rare classes")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*prepare) {
    auto prepared = prep_flags.run();
    save_corpus_artifact(prepared, prep_out);
    print_stats(std::cout, prepared.corpus);
    return 0;
  }

  if (*train_cmd) {
    auto prepared = load_corpus_artifact(train_corpus);
    const auto& corpus = prepared.corpus;
    const auto kind = parse_model_kind(train_kind);
    auto params = train_hyper.params(kind, corpus);
    if (train_alpha) params.alpha = *train_alpha;
    if (train_beta) params.beta = *train_beta;
    params.seed = train_seed;
    params.validate();

    if (!dump_network.empty() || !dump_pseudo.empty()) {
      if (kind == ModelKind::lda) throw InvalidConfig("lda has no word network");
      auto raw = accumulate_pair_counts(corpus, params.window, params.window_mode);
      std::ostringstream net_out;
      std::ostringstream pseudo_out;
      if (kind == ModelKind::wntm) {
        write_network(net_out, raw, corpus.vocab);
        write_pseudo_docs(pseudo_out, build_pseudo_docs(raw), corpus.vocab);
      } else {
        auto pruned = prune(raw);
        write_network(net_out, pruned, corpus.vocab);
        write_pseudo_docs(pseudo_out, build_pseudo_docs(pruned, params.scale),
                          corpus.vocab);
      }
      if (!dump_network.empty()) write_text(dump_network, net_out.str());
      if (!dump_pseudo.empty()) write_text(dump_pseudo, pseudo_out.str());
    }

    const auto start = std::chrono::steady_clock::now();
    auto model = train_model(kind, corpus, params);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    save_model(model, train_out);
    const auto manifest = training_manifest(model, secs);
    write_text(train_out + ".manifest.json", manifest);
    std::cout << manifest;
    return 0;
  }

  if (*infer) {
    auto model = load_model(infer_model);
    auto prepared = load_corpus_artifact(infer_corpus_path);
    if (prepared.corpus.vocab.hash() != model.vocab_hash) {
      throw VocabularyMismatch("corpus artifact vocabulary does not match the model");
    }
    LabeledCorpus docs;
    if (infer_input.empty()) {
      docs = prepared.corpus;
    } else {
      auto raw = load_labeled_corpus(infer_input, parse_corpus_format(infer_format));
      docs = encode_with(raw, prepared.corpus.vocab, prepared.config);
    }
    std::ostringstream out;
    if (!docs.docs.empty()) {
      auto dists = infer_corpus(model, docs);
      for (std::size_t d = 0; d < dists.size(); ++d) {
        write_inference_line(out, d, dists[d]);
      }
    }
    if (infer_out.empty()) {
      std::cout << out.str();
    } else {
      write_text(infer_out, out.str());
    }
    return 0;
  }

  if (*bench) {
    PreparedCorpus prepared;
    if (!bench_corpus.empty()) {
      prepared = load_corpus_artifact(bench_corpus);
    } else if (!bench_prep.input.empty()) {
      prepared = bench_prep.run();
    } else {
      throw InvalidConfig("benchmark needs --corpus or --input");
    }
    const auto& corpus = prepared.corpus;
    if (bench_rare) {
      plan.rare_classes = *bench_rare;
    } else if (prepared.subset) {
      plan.rare_classes = prepared.subset->rare_classes;
    }
    for (const auto& name : bench_models) {
      const auto kind = parse_model_kind(name);
      ModelSpec spec{kind, bench_hyper.params(kind, corpus)};
      if (auto a = priors[name + "-alpha"]) spec.params.alpha = *a;
      if (auto b = priors[name + "-beta"]) spec.params.beta = *b;
      plan.models.push_back(spec);
    }
    auto result = run_benchmark(plan, corpus);
    std::cout << format_report_table(result);
    return 0;
  }

  if (*eval) {
    auto pred_lines = read_lines(eval_pred);
    auto truth_lines = read_lines(eval_truth);
    std::map<std::string, Label> pred_ids;
    std::map<std::string, Label> truth_ids;
    auto intern = [](std::map<std::string, Label>& ids, const std::string& s) {
      return ids.emplace(s, static_cast<Label>(ids.size())).first->second;
    };
    std::vector<Label> pred;
    std::vector<Label> truth;
    for (const auto& s : pred_lines) pred.push_back(intern(pred_ids, s));
    for (const auto& s : truth_lines) truth.push_back(intern(truth_ids, s));
    std::vector<Label> rare;
    for (const auto& name : eval_rare) {
      auto it = truth_ids.find(name);
      if (it == truth_ids.end()) throw UnknownClass("unknown class '" + name + "'");
      rare.push_back(it->second);
    }
    auto m = scoped_metrics(pred, truth, rare);
    char buf[128];
    std::snprintf(buf, sizeof buf, "all  N=%zu purity=%.6f nmi=%.6f\n", m.all.docs,
                  m.all.purity, m.all.nmi);
    std::cout << buf;
    if (m.rare) {
      std::snprintf(buf, sizeof buf, "rare N=%zu purity=%.6f nmi=%.6f\n",
                    m.rare->docs, m.rare->purity, m.rare->nmi);
      std::cout << buf;
    }
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
