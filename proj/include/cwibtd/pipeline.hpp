#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwibtd/corpus.hpp"
#include "cwibtd/metrics.hpp"
#include "cwibtd/model.hpp"

namespace cwibtd {

/// An encoded corpus plus the preprocessing settings that produced it.
struct PreparedCorpus {
  LabeledCorpus corpus;
  PreprocessConfig config;
  std::string source;  // input path as given
  std::optional<SubsetSpec> subset;
};

PreparedCorpus prepare_corpus(const std::string& input, CorpusFormat format,
                              const PreprocessConfig& config,
                              const std::optional<SubsetSpec>& subset = {});

/// JSON artifact: manifest, stats, vocabulary, class names, documents.
std::string corpus_artifact_to_string(const PreparedCorpus& prepared);
PreparedCorpus corpus_artifact_from_string(const std::string& text);
void save_corpus_artifact(const PreparedCorpus& prepared, const std::string& path);
PreparedCorpus load_corpus_artifact(const std::string& path);

/// Human-readable training summary, including wall time; kept apart from
/// the model file so the model itself stays reproducible.
std::string training_manifest(const TrainedModel& model, double wall_seconds);

/// Which documents count towards metrics.
struct EvalPolicy {
  bool include_uncovered = false;  // documents with no topic signal
};

/// Cluster ids for every document, plus the indices that the policy keeps
/// (documents left empty by preprocessing are never kept).
struct Assignment {
  std::vector<TopicId> clusters;
  std::vector<std::size_t> kept;
};

Assignment assign_documents(const TrainedModel& model,
                            const LabeledCorpus& corpus,
                            const EvalPolicy& policy = {});

ScopedMetrics evaluate_assignment(const Assignment& assignment,
                                  const LabeledCorpus& corpus,
                                  const std::vector<ClassId>& rare_classes);

struct ModelSpec {
  ModelKind kind = ModelKind::cwibtd;
  ModelParams params;
};

struct BenchmarkPlan {
  std::vector<ModelSpec> models;
  std::size_t runs = 10;
  std::uint64_t base_seed = 1;
  std::vector<std::string> rare_classes;
  EvalPolicy policy;
  unsigned threads = 1;
  std::string output_dir;  // empty: no files written

  /// Seed of run i (0-based).
  std::uint64_t seed_for(std::size_t run) const noexcept { return base_seed + run; }
  void validate() const;
};

struct ModelResult {
  ModelSpec spec;
  std::vector<std::optional<ScopedMetrics>> runs;  // nullopt: failed
  std::vector<std::string> errors;                 // per run, empty if ok
  MetricReport all;
  MetricReport rare;
  bool failed() const;
};

struct BenchmarkResult {
  std::vector<ModelResult> models;
  std::size_t runs = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::string> rare_classes;
  CorpusStats stats;
  bool failed() const;
};

/// Trains every model for every run, evaluates both scopes and aggregates.
/// When `output_dir` is set, writes report.txt and report.json there. A run
/// failure still writes the partial report (failed cells marked FAILED) and
/// then throws an Error naming the model and run.
BenchmarkResult run_benchmark(const BenchmarkPlan& plan,
                              const LabeledCorpus& corpus);

/// Aligned table: one block per model, Purity and NMI rows, rare/all columns.
std::string format_report_table(const BenchmarkResult& result);
/// Machine-readable report with per-run values.
std::string format_report_json(const BenchmarkResult& result);

}  // namespace cwibtd
