#include "cwibtd/sampler.hpp"

#include <cmath>

#include "cwibtd/error.hpp"

namespace cwibtd {

void SamplerConfig::validate() const {
  if (topics < 1) throw InvalidConfig("topic count must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidConfig("alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidConfig("beta must be > 0");
  if (iterations < 1) throw InvalidConfig("iterations must be >= 1");
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::size_t Rng::below(std::size_t n) noexcept {
  auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

TopicModelState init_state(TokenDocs docs, std::size_t vocab_size,
                           const SamplerConfig& config) {
  config.validate();
  if (docs.empty()) throw EmptyInput("no documents to sample");
  TopicModelState s;
  s.vocab_size = vocab_size;
  s.topics = config.topics;
  s.rng = Rng(config.seed);
  s.doc_topic = CountMatrix(docs.size(), config.topics);
  s.word_topic = CountMatrix(vocab_size, config.topics);
  s.topic_total.assign(config.topics, 0);
  s.z.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    s.z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const WordId w = docs[d][i];
      if (w >= vocab_size) throw FormatError("token id out of vocabulary range");
      const auto k = static_cast<TopicId>(s.rng.below(config.topics));
      s.z[d][i] = k;
      ++s.doc_topic(d, k);
      ++s.word_topic(w, k);
      ++s.topic_total[k];
    }
    s.total_tokens += docs[d].size();
  }
  if (s.total_tokens == 0) throw EmptyInput("documents contain no tokens");
  s.docs = std::move(docs);
  return s;
}

std::vector<double> conditional_weights(const TopicModelState& state,
                                        std::size_t doc, WordId word,
                                        const SamplerConfig& config) {
  const double vbeta = static_cast<double>(state.vocab_size) * config.beta;
  std::vector<double> p(state.topics);
  for (std::size_t k = 0; k < state.topics; ++k) {
    p[k] = (state.doc_topic(doc, k) + config.alpha) *
           (state.word_topic(word, k) + config.beta) /
           (state.topic_total[k] + vbeta);
  }
  return p;
}

void gibbs_sweep(TopicModelState& state, const SamplerConfig& config) {
  const std::size_t K = state.topics;
  const double alpha = config.alpha;
  const double beta = config.beta;
  const double vbeta = static_cast<double>(state.vocab_size) * beta;

  std::vector<double> inv_denom(K);
  for (std::size_t k = 0; k < K; ++k) {
    inv_denom[k] = 1.0 / (state.topic_total[k] + vbeta);
  }
  std::vector<double> cumulative(K);

  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    const auto& tokens = state.docs[d];
    auto& zd = state.z[d];
    auto nd = state.doc_topic.row(d);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const WordId w = tokens[i];
      auto nw = state.word_topic.row(w);
      TopicId k = zd[i];

      --nd[k];
      --nw[k];
      --state.topic_total[k];
      inv_denom[k] = 1.0 / (state.topic_total[k] + vbeta);

      double total = 0.0;
      for (std::size_t t = 0; t < K; ++t) {
        total += (nd[t] + alpha) * (nw[t] + beta) * inv_denom[t];
        cumulative[t] = total;
      }
      if (!std::isfinite(total) || !(total > 0.0)) {
        throw NumericalError("sampling weights sum to " + std::to_string(total) +
                             " at document " + std::to_string(d) + ", token " +
                             std::to_string(i));
      }

      const double u = state.rng.uniform() * total;
      std::size_t t = 0;
      while (t + 1 < K && cumulative[t] <= u) ++t;
      k = static_cast<TopicId>(t);

      zd[i] = k;
      ++nd[k];
      ++nw[k];
      ++state.topic_total[k];
      inv_denom[k] = 1.0 / (state.topic_total[k] + vbeta);
    }
  }
}

void verify_invariants(const TopicModelState& state) {
  const std::size_t K = state.topics;
  std::size_t grand = 0;
  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const auto c = state.doc_topic(d, k);
      if (c < 0) throw NumericalError("negative doc-topic count in document " + std::to_string(d));
      sum += c;
    }
    if (sum != static_cast<std::int64_t>(state.docs[d].size())) {
      throw NumericalError("doc-topic counts of document " + std::to_string(d) +
                           " do not sum to its length");
    }
  }
  std::vector<std::int64_t> column(K, 0);
  for (std::size_t w = 0; w < state.vocab_size; ++w) {
    for (std::size_t k = 0; k < K; ++k) {
      const auto c = state.word_topic(w, k);
      if (c < 0) throw NumericalError("negative word-topic count for word " + std::to_string(w));
      column[k] += c;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (state.topic_total[k] < 0) throw NumericalError("negative topic total");
    if (column[k] != state.topic_total[k]) {
      throw NumericalError("word-topic column " + std::to_string(k) +
                           " does not sum to the topic total");
    }
    grand += static_cast<std::size_t>(state.topic_total[k]);
  }
  if (grand != state.total_tokens) {
    throw NumericalError("topic totals do not sum to the token count");
  }
}

Matrix estimate_phi(const TopicModelState& state, double beta) {
  const std::size_t K = state.topics;
  const std::size_t V = state.vocab_size;
  const double vbeta = static_cast<double>(V) * beta;
  Matrix phi(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = state.topic_total[k] + vbeta;
    for (std::size_t w = 0; w < V; ++w) {
      phi(k, w) = (state.word_topic(w, k) + beta) / denom;
    }
  }
  return phi;
}

Matrix estimate_theta(const TopicModelState& state, double alpha) {
  const std::size_t K = state.topics;
  const double kalpha = static_cast<double>(K) * alpha;
  Matrix theta(state.docs.size(), K);
  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    const double denom = static_cast<double>(state.docs[d].size()) + kalpha;
    for (std::size_t k = 0; k < K; ++k) {
      theta(d, k) = (state.doc_topic(d, k) + alpha) / denom;
    }
  }
  return theta;
}

TrainResult train(TokenDocs docs, std::size_t vocab_size,
                  const SamplerConfig& config, const SweepObserver& observer) {
  TrainResult result{init_state(std::move(docs), vocab_size, config), {}, {}};
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    gibbs_sweep(result.state, config);
    if (observer) observer(it, result.state);
  }
  result.phi = estimate_phi(result.state, config.beta);
  result.theta = estimate_theta(result.state, config.alpha);
  return result;
}

}  // namespace cwibtd
