#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwibtd/conet.hpp"
#include "cwibtd/corpus.hpp"
#include "cwibtd/inference.hpp"
#include "cwibtd/matrix.hpp"
#include "cwibtd/pseudodoc.hpp"
#include "cwibtd/sampler.hpp"

namespace cwibtd {

enum class ModelKind { lda, wntm, cwibtd };

ModelKind parse_model_kind(std::string_view name);
const char* to_string(ModelKind kind) noexcept;

struct ModelParams {
  std::size_t topics = 8;
  double alpha = 0.1;
  double beta = 0.1;
  std::size_t iterations = 2000;
  std::uint64_t seed = 1;
  std::size_t window = 10;
  WindowMode window_mode = WindowMode::sliding;
  double scale = 10.0;

  /// LDA: α = 0.05, β = 0.01. WNTM and CWIBTD: α = β = 0.1, window 10.
  static ModelParams defaults(ModelKind kind, std::size_t topics);

  SamplerConfig sampler() const;
  void validate() const;
};

/// Network sizes reported by the word-network models.
struct NetworkStats {
  std::size_t words = 0;           // words with at least one raw edge
  std::size_t raw_edges = 0;
  std::uint64_t raw_total_weight = 0;
  std::size_t pruned_edges = 0;    // equals raw_edges for wntm
  std::size_t pseudo_docs = 0;
  std::size_t pseudo_tokens = 0;
};

/// Everything needed to assign topics to documents after training.
///
/// For network models θ has one row per connected word (`theta_words[r]` is
/// the word of row r). For LDA it has one row per training document and
/// `training_hash` fingerprints that corpus.
struct TrainedModel {
  ModelKind kind = ModelKind::lda;
  ModelParams params;
  std::uint64_t vocab_hash = 0;
  std::size_t vocab_size = 0;
  Matrix phi;    // K x V
  Matrix theta;
  std::vector<WordId> theta_words;
  std::vector<std::int32_t> topic_total;
  CountMatrix word_topic;  // V x K
  std::uint64_t training_hash = 0;
  std::optional<NetworkStats> network;

  std::size_t topics() const noexcept { return phi.rows(); }
};

/// lda: sample the documents directly. wntm: sliding-window network to
/// count-mode pseudo-documents. cwibtd: network, PMI prune, pmi-scaled
/// pseudo-documents.
TrainedModel train_model(ModelKind kind, const LabeledCorpus& corpus,
                         const ModelParams& params);

/// Fingerprint of an encoded corpus (vocabulary and token sequences).
std::uint64_t corpus_fingerprint(const LabeledCorpus& corpus);

/// Topic distribution of every document. Network models evaluate the
/// word-mixture rule; LDA reuses θ and so only accepts its training corpus
/// (throws VocabularyMismatch / FormatError otherwise).
std::vector<DocTopicDistribution> infer_corpus(const TrainedModel& model,
                                               const LabeledCorpus& corpus);

/// Versioned JSON model file. Probabilities round-trip exactly.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);
std::string model_to_string(const TrainedModel& model);
TrainedModel model_from_string(const std::string& text);

}  // namespace cwibtd
