#include "cwibtd/model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cwibtd/error.hpp"
#include "cwibtd/hash.hpp"
#include "json.hpp"

namespace cwibtd {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "cwibtd-model";
constexpr int kModelVersion = 1;

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
  if (name == "lda") return ModelKind::lda;
  if (name == "wntm") return ModelKind::wntm;
  if (name == "cwibtd") return ModelKind::cwibtd;
  throw InvalidConfig("unknown model '" + std::string(name) + "'");
}

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::lda: return "lda";
    case ModelKind::wntm: return "wntm";
    case ModelKind::cwibtd: return "cwibtd";
  }
  return "?";
}

ModelParams ModelParams::defaults(ModelKind kind, std::size_t topics) {
  ModelParams p;
  p.topics = topics;
  if (kind == ModelKind::lda) {
    p.alpha = 0.05;
    p.beta = 0.01;
  } else {
    p.alpha = 0.1;
    p.beta = 0.1;
    p.window = 10;
  }
  return p;
}

SamplerConfig ModelParams::sampler() const {
  return {topics, alpha, beta, iterations, seed};
}

void ModelParams::validate() const {
  if (topics < 2) throw InvalidConfig("topic count must be >= 2");
  sampler().validate();
  if (window < 2) throw InvalidConfig("window size must be >= 2");
  if (!(scale > 0.0)) throw InvalidScale("scale must be > 0");
}

std::uint64_t corpus_fingerprint(const LabeledCorpus& corpus) {
  Fnv1a h;
  h.update_u64(corpus.vocab.hash());
  h.update_u64(corpus.size());
  for (const auto& d : corpus.docs) {
    h.update_u64(d.length());
    for (WordId w : d.tokens) h.update_u64(w);
  }
  return h.digest();
}

TrainedModel train_model(ModelKind kind, const LabeledCorpus& corpus,
                         const ModelParams& params) {
  params.validate();
  TrainedModel model;
  model.kind = kind;
  model.params = params;
  model.vocab_hash = corpus.vocab.hash();
  model.vocab_size = corpus.vocab.size();

  TokenDocs docs;
  if (kind == ModelKind::lda) {
    docs.reserve(corpus.size());
    for (const auto& d : corpus.docs) docs.push_back(d.tokens);
    model.training_hash = corpus_fingerprint(corpus);
  } else {
    auto raw = accumulate_pair_counts(corpus, params.window, params.window_mode);
    NetworkStats stats;
    stats.words = raw.num_connected_words();
    stats.raw_edges = raw.num_edges();
    stats.raw_total_weight = raw.total_weight();
    PseudoDocumentSet pseudo;
    if (kind == ModelKind::wntm) {
      pseudo = build_pseudo_docs(raw);
      stats.pruned_edges = raw.num_edges();
    } else {
      auto pruned = prune(raw);
      stats.pruned_edges = pruned.num_edges();
      pseudo = build_pseudo_docs(pruned, params.scale);
    }
    stats.pseudo_docs = pseudo.size();
    stats.pseudo_tokens = pseudo.total_tokens();
    model.network = stats;
    for (const auto& d : pseudo.docs()) model.theta_words.push_back(d.origin);
    docs = pseudo.token_lists();
  }

  auto result = train(std::move(docs), corpus.vocab.size(), params.sampler());
  model.phi = std::move(result.phi);
  model.theta = std::move(result.theta);
  model.topic_total = result.state.topic_total;
  model.word_topic = std::move(result.state.word_topic);
  return model;
}

std::vector<DocTopicDistribution> infer_corpus(const TrainedModel& model,
                                               const LabeledCorpus& corpus) {
  if (corpus.vocab.hash() != model.vocab_hash ||
      corpus.vocab.size() != model.vocab_size) {
    throw VocabularyMismatch("corpus vocabulary does not match the model's");
  }
  std::vector<DocTopicDistribution> out;
  out.reserve(corpus.size());
  if (model.kind == ModelKind::lda) {
    if (corpus_fingerprint(corpus) != model.training_hash ||
        corpus.size() != model.theta.rows()) {
      throw FormatError(
          "an lda model only holds topic proportions for its training "
          "documents; other inputs need folding-in, which is not supported");
    }
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      out.push_back(from_theta_row(model.theta.row(d), corpus.docs[d].length()));
    }
    return out;
  }
  WordTopicTable table(model.theta, model.theta_words, model.vocab_size);
  for (const auto& d : corpus.docs) out.push_back(infer_doc_topics(d, table));
  return out;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::size_t used = 0;
  auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw FormatError("bad hex value '" + s + "'");
  return v;
}

template <class T>
json matrix_to_json(const DenseMatrix<T>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<T>(row.begin(), row.end()));
  }
  return rows;
}

template <class T>
DenseMatrix<T> matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw FormatError("matrix row count mismatch");
  DenseMatrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto values = j[r].get<std::vector<T>>();
    if (values.size() != cols) throw FormatError("matrix column count mismatch");
    std::copy(values.begin(), values.end(), m.row(r).begin());
  }
  return m;
}

}  // namespace

std::string model_to_string(const TrainedModel& m) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["kind"] = to_string(m.kind);
  j["params"] = {
      {"topics", m.params.topics},   {"alpha", m.params.alpha},
      {"beta", m.params.beta},       {"iterations", m.params.iterations},
      {"seed", m.params.seed},       {"window", m.params.window},
      {"window_mode", to_string(m.params.window_mode)},
      {"scale", m.params.scale},
  };
  j["vocab_hash"] = hex64(m.vocab_hash);
  j["vocab_size"] = m.vocab_size;
  j["training_hash"] = hex64(m.training_hash);
  if (m.network) {
    const auto& n = *m.network;
    j["network"] = {{"words", n.words},
                    {"raw_edges", n.raw_edges},
                    {"raw_total_weight", n.raw_total_weight},
                    {"pruned_edges", n.pruned_edges},
                    {"pseudo_docs", n.pseudo_docs},
                    {"pseudo_tokens", n.pseudo_tokens}};
  } else {
    j["network"] = nullptr;
  }
  j["topic_total"] = m.topic_total;
  j["word_topic"] = matrix_to_json(m.word_topic);
  j["phi"] = matrix_to_json(m.phi);
  j["theta_rows"] = m.theta.rows();
  j["theta_words"] = m.theta_words;
  j["theta"] = matrix_to_json(m.theta);
  return j.dump(1) + "\n";
}

TrainedModel model_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != kModelFormat) throw FormatError("not a model file");
    if (j.at("version") != kModelVersion) {
      throw FormatError("unsupported model version " + j.at("version").dump());
    }
    TrainedModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    const auto& p = j.at("params");
    m.params.topics = p.at("topics");
    m.params.alpha = p.at("alpha");
    m.params.beta = p.at("beta");
    m.params.iterations = p.at("iterations");
    m.params.seed = p.at("seed");
    m.params.window = p.at("window");
    m.params.window_mode = parse_window_mode(p.at("window_mode").get<std::string>());
    m.params.scale = p.at("scale");
    m.vocab_hash = parse_hex64(j.at("vocab_hash"));
    m.vocab_size = j.at("vocab_size");
    m.training_hash = parse_hex64(j.at("training_hash"));
    if (!j.at("network").is_null()) {
      const auto& n = j["network"];
      m.network = NetworkStats{n.at("words"),        n.at("raw_edges"),
                               n.at("raw_total_weight"), n.at("pruned_edges"),
                               n.at("pseudo_docs"),  n.at("pseudo_tokens")};
    }
    const std::size_t K = m.params.topics;
    m.topic_total = j.at("topic_total").get<std::vector<std::int32_t>>();
    if (m.topic_total.size() != K) throw FormatError("topic_total length mismatch");
    m.word_topic = matrix_from_json<std::int32_t>(j.at("word_topic"), m.vocab_size, K);
    m.phi = matrix_from_json<double>(j.at("phi"), K, m.vocab_size);
    m.theta_words = j.at("theta_words").get<std::vector<WordId>>();
    m.theta = matrix_from_json<double>(j.at("theta"), j.at("theta_rows"), K);
    if (m.kind != ModelKind::lda && m.theta_words.size() != m.theta.rows()) {
      throw FormatError("theta_words length mismatch");
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << model_to_string(model);
  if (!out) throw IoError("write failed on " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str());
}

}  // namespace cwibtd
