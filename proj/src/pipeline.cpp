#include "cwibtd/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cwibtd/error.hpp"
#include "json.hpp"

namespace cwibtd {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kCorpusFormat = "cwibtd-corpus";
constexpr int kCorpusVersion = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed on " + path);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

PreparedCorpus prepare_corpus(const std::string& input, CorpusFormat format,
                              const PreprocessConfig& config,
                              const std::optional<SubsetSpec>& subset) {
  if (subset && format != CorpusFormat::labeled) {
    throw InvalidConfig("class subsets need a labeled corpus");
  }
  auto raw = load_labeled_corpus(input, format);
  if (raw.texts.empty()) throw EmptyInput(input + " contains no documents");
  PreparedCorpus out;
  out.corpus = preprocess(raw, config, subset);
  out.config = config;
  out.source = input;
  out.subset = subset;
  return out;
}

std::string corpus_artifact_to_string(const PreparedCorpus& p) {
  const auto& c = p.corpus;
  const auto stats = corpus_stats(c);
  ordered_json j;
  j["format"] = kCorpusFormat;
  j["version"] = kCorpusVersion;
  j["manifest"] = {
      {"source", p.source},
      {"min_count", p.config.min_count},
      {"lowercase", p.config.lowercase},
      {"use_default_stopwords", p.config.use_default_stopwords},
      {"stopword_path", p.config.stopword_path},
      {"keep_chars", p.config.keep_chars},
      {"stopwords_before_min_count", true},
  };
  if (p.subset) {
    j["manifest"]["subset"] = {
        {"large_classes", p.subset->large_classes},
        {"per_large", p.subset->per_large},
        {"rare_classes", p.subset->rare_classes},
        {"per_rare", p.subset->per_rare},
    };
  } else {
    j["manifest"]["subset"] = nullptr;
  }
  j["stats"] = {
      {"N", stats.num_docs},
      {"V", stats.vocab_size},
      {"K", stats.num_classes},
      {"tokens", stats.total_tokens},
      {"mean_len", fixed(stats.mean_length, 2)},
      {"max_len", stats.max_length},
      {"empty_docs", stats.empty_docs},
  };
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(c.vocab.hash()));
  j["vocab_hash"] = hash;
  j["vocab"] = c.vocab.words();
  j["class_names"] = c.class_names;
  j["labels"] = c.labels;
  json docs = json::array();
  for (const auto& d : c.docs) docs.push_back(d.tokens);
  j["docs"] = std::move(docs);
  return j.dump() + "\n";
}

PreparedCorpus corpus_artifact_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("corpus artifact is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != kCorpusFormat) throw FormatError("not a corpus artifact");
    if (j.at("version") != kCorpusVersion) throw FormatError("unsupported corpus artifact version");
    PreparedCorpus p;
    const auto& m = j.at("manifest");
    p.source = m.at("source");
    p.config.min_count = m.at("min_count");
    p.config.lowercase = m.at("lowercase");
    p.config.use_default_stopwords = m.at("use_default_stopwords");
    p.config.stopword_path = m.at("stopword_path");
    p.config.keep_chars = m.at("keep_chars");
    if (!m.at("subset").is_null()) {
      const auto& s = m["subset"];
      p.subset = SubsetSpec{s.at("large_classes"), s.at("per_large"),
                            s.at("rare_classes"), s.at("per_rare")};
    }
    p.corpus.vocab = Vocabulary(j.at("vocab").get<std::vector<std::string>>());
    p.corpus.class_names = j.at("class_names").get<std::vector<std::string>>();
    p.corpus.labels = j.at("labels").get<std::vector<ClassId>>();
    for (const auto& d : j.at("docs")) {
      Document doc;
      doc.tokens = d.get<std::vector<WordId>>();
      doc.emptied = doc.tokens.empty();
      p.corpus.docs.push_back(std::move(doc));
    }
    p.corpus.validate();
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed corpus artifact: ") + e.what());
  }
}

void save_corpus_artifact(const PreparedCorpus& prepared, const std::string& path) {
  write_file(path, corpus_artifact_to_string(prepared));
}

PreparedCorpus load_corpus_artifact(const std::string& path) {
  return corpus_artifact_from_string(read_file(path));
}

std::string training_manifest(const TrainedModel& model, double wall_seconds) {
  ordered_json j;
  j["kind"] = to_string(model.kind);
  j["topics"] = model.params.topics;
  j["alpha"] = model.params.alpha;
  j["beta"] = model.params.beta;
  j["iterations"] = model.params.iterations;
  j["seed"] = model.params.seed;
  if (model.kind != ModelKind::lda) {
    j["window"] = model.params.window;
    j["window_mode"] = to_string(model.params.window_mode);
  }
  if (model.kind == ModelKind::cwibtd) j["scale"] = model.params.scale;
  j["vocab_size"] = model.vocab_size;
  if (model.network) {
    const auto& n = *model.network;
    j["network"] = {{"nodes", n.words},
                    {"edges_raw", n.raw_edges},
                    {"edges_pruned", n.pruned_edges},
                    {"total_pair_weight", n.raw_total_weight},
                    {"pseudo_docs", n.pseudo_docs},
                    {"pseudo_tokens", n.pseudo_tokens}};
  }
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

Assignment assign_documents(const TrainedModel& model,
                            const LabeledCorpus& corpus,
                            const EvalPolicy& policy) {
  auto dists = infer_corpus(model, corpus);
  Assignment a;
  a.clusters.reserve(dists.size());
  for (std::size_t d = 0; d < dists.size(); ++d) {
    a.clusters.push_back(assign_cluster(dists[d]));
    if (corpus.docs[d].empty()) continue;
    if (dists[d].no_signal && !policy.include_uncovered) continue;
    a.kept.push_back(d);
  }
  return a;
}

ScopedMetrics evaluate_assignment(const Assignment& assignment,
                                  const LabeledCorpus& corpus,
                                  const std::vector<ClassId>& rare_classes) {
  if (!corpus.labeled()) throw LabelMismatch("evaluation needs a labeled corpus");
  std::vector<Label> pred;
  std::vector<Label> truth;
  for (auto d : assignment.kept) {
    pred.push_back(assignment.clusters[d]);
    truth.push_back(corpus.labels[d]);
  }
  if (pred.empty()) throw EmptyInput("no document carries topic information");
  // Rare classes whose documents were all excluded cannot be scored.
  std::vector<Label> present;
  for (ClassId c : rare_classes) {
    if (std::find(truth.begin(), truth.end(), c) != truth.end()) present.push_back(c);
  }
  if (!rare_classes.empty() && present.empty()) {
    ScopedMetrics out;
    out.all = evaluate(pred, truth);
    return out;
  }
  return scoped_metrics(pred, truth, present);
}

void BenchmarkPlan::validate() const {
  if (runs < 1) throw InvalidConfig("runs must be >= 1");
  if (models.empty()) throw InvalidConfig("no models selected");
  for (const auto& m : models) m.params.validate();
}

bool ModelResult::failed() const {
  return std::any_of(errors.begin(), errors.end(),
                     [](const std::string& e) { return !e.empty(); });
}

bool BenchmarkResult::failed() const {
  return std::any_of(models.begin(), models.end(),
                     [](const ModelResult& m) { return m.failed(); });
}

namespace {

std::string model_label(ModelKind kind) {
  switch (kind) {
    case ModelKind::lda: return "LDA";
    case ModelKind::wntm: return "WNTM";
    case ModelKind::cwibtd: return "CWIBTD";
  }
  return "?";
}

void finalize(ModelResult& r) {
  std::vector<ScopedMetrics> ok;
  for (const auto& run : r.runs) {
    if (run) ok.push_back(*run);
  }
  r.all = aggregate(Scope::all, ok);
  r.rare = aggregate(Scope::rare, ok);
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkPlan& plan,
                              const LabeledCorpus& corpus) {
  plan.validate();
  if (!corpus.labeled()) throw LabelMismatch("benchmark needs a labeled corpus");
  const auto rare = resolve_classes(corpus, plan.rare_classes);

  BenchmarkResult result;
  result.runs = plan.runs;
  result.base_seed = plan.base_seed;
  result.rare_classes = plan.rare_classes;
  result.stats = corpus_stats(corpus);
  for (const auto& spec : plan.models) {
    ModelResult r;
    r.spec = spec;
    r.runs.resize(plan.runs);
    r.errors.resize(plan.runs);
    result.models.push_back(std::move(r));
  }

  const std::size_t tasks = plan.models.size() * plan.runs;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks || abort.load()) return;
      auto& r = result.models[t / plan.runs];
      const std::size_t run = t % plan.runs;
      try {
        ModelParams params = r.spec.params;
        params.seed = plan.seed_for(run);
        auto model = train_model(r.spec.kind, corpus, params);
        auto assignment = assign_documents(model, corpus, plan.policy);
        r.runs[run] = evaluate_assignment(assignment, corpus, rare);
      } catch (const std::exception& e) {
        r.errors[run] = e.what();
        abort.store(true);
      }
    }
  };
  const unsigned threads =
      std::max(1U, std::min<unsigned>(plan.threads, static_cast<unsigned>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& r : result.models) finalize(r);

  if (!plan.output_dir.empty()) {
    std::filesystem::create_directories(plan.output_dir);
    const std::filesystem::path dir(plan.output_dir);
    write_file((dir / "report.txt").string(), format_report_table(result));
    write_file((dir / "report.json").string(), format_report_json(result));
  }

  for (const auto& r : result.models) {
    for (std::size_t run = 0; run < r.errors.size(); ++run) {
      if (r.errors[run].empty()) continue;
      throw Error(ErrorKind::data, std::string(to_string(r.spec.kind)) +
                                       " run " + std::to_string(run) +
                                       " (seed " +
                                       std::to_string(plan.seed_for(run)) +
                                       ") failed: " + r.errors[run]);
    }
  }
  return result;
}

std::string format_report_table(const BenchmarkResult& result) {
  std::ostringstream out;
  out << "N=" << result.stats.num_docs << " V=" << result.stats.vocab_size
      << " K=" << result.stats.num_classes << " runs=" << result.runs
      << " base_seed=" << result.base_seed << "\n";
  if (!result.rare_classes.empty()) {
    out << "rare classes:";
    for (const auto& c : result.rare_classes) out << ' ' << c;
    out << "\n";
  }
  out << "\n";
  const bool with_rare = !result.rare_classes.empty();
  char line[160];
  if (with_rare) {
    std::snprintf(line, sizeof line, "%-8s %-7s %10s %10s\n", "Model", "Metric",
                  "rare", "all");
  } else {
    std::snprintf(line, sizeof line, "%-8s %-7s %10s\n", "Model", "Metric", "all");
  }
  out << line;
  auto cell = [&](const ModelResult& r, const MetricReport& rep, bool nmi) {
    if (r.failed()) return std::string("FAILED");
    if (rep.empty_scope) return std::string("-");
    return fixed(nmi ? rep.nmi_mean : rep.purity_mean, 3);
  };
  for (const auto& r : result.models) {
    const auto name = model_label(r.spec.kind);
    for (int row = 0; row < 2; ++row) {
      const bool is_nmi = row == 1;
      const char* metric = is_nmi ? "NMI" : "Purity";
      const std::string label = row == 0 ? name : "";
      if (with_rare) {
        std::snprintf(line, sizeof line, "%-8s %-7s %10s %10s\n", label.c_str(),
                      metric, cell(r, r.rare, is_nmi).c_str(),
                      cell(r, r.all, is_nmi).c_str());
      } else {
        std::snprintf(line, sizeof line, "%-8s %-7s %10s\n", label.c_str(),
                      metric, cell(r, r.all, is_nmi).c_str());
      }
      out << line;
    }
  }
  return out.str();
}

std::string format_report_json(const BenchmarkResult& result) {
  ordered_json j;
  j["runs"] = result.runs;
  j["base_seed"] = result.base_seed;
  j["rare_classes"] = result.rare_classes;
  j["corpus"] = {{"N", result.stats.num_docs},
                 {"V", result.stats.vocab_size},
                 {"K", result.stats.num_classes}};
  j["status"] = result.failed() ? "FAILED" : "ok";
  ordered_json models = ordered_json::array();
  for (const auto& r : result.models) {
    ordered_json m;
    m["model"] = to_string(r.spec.kind);
    const auto& p = r.spec.params;
    m["params"] = {{"topics", p.topics},          {"alpha", p.alpha},
                   {"beta", p.beta},              {"iterations", p.iterations},
                   {"window", p.window},          {"window_mode", to_string(p.window_mode)},
                   {"scale", p.scale}};
    m["status"] = r.failed() ? "FAILED" : "ok";
    ordered_json runs = ordered_json::array();
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      ordered_json run;
      run["run"] = i;
      run["seed"] = result.base_seed + i;
      if (!r.errors[i].empty()) {
        run["status"] = "FAILED";
        run["error"] = r.errors[i];
      } else if (!r.runs[i]) {
        run["status"] = "not run";
      } else {
        const auto& s = *r.runs[i];
        run["status"] = "ok";
        run["all"] = {{"purity", s.all.purity}, {"nmi", s.all.nmi}, {"docs", s.all.docs}};
        if (s.rare) {
          run["rare"] = {{"purity", s.rare->purity}, {"nmi", s.rare->nmi},
                         {"docs", s.rare->docs}};
        } else {
          run["rare"] = nullptr;
        }
      }
      runs.push_back(std::move(run));
    }
    m["runs"] = std::move(runs);
    auto scope_json = [](const MetricReport& rep) -> ordered_json {
      if (rep.empty_scope) return nullptr;
      return {{"purity_mean", rep.purity_mean}, {"nmi_mean", rep.nmi_mean},
              {"runs", rep.runs()}};
    };
    m["mean"] = {{"all", scope_json(r.all)}, {"rare", scope_json(r.rare)}};
    models.push_back(std::move(m));
  }
  j["models"] = std::move(models);
  return j.dump(2) + "\n";
}

}  // namespace cwibtd
