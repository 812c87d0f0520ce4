#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cwibtd/corpus.hpp"
#include "cwibtd/matrix.hpp"

namespace cwibtd {

using TopicId = std::uint32_t;
using TokenDocs = std::vector<std::vector<WordId>>;

struct SamplerConfig {
  std::size_t topics = 8;
  double alpha = 0.1;
  double beta = 0.1;
  std::size_t iterations = 2000;
  std::uint64_t seed = 1;

  /// Throws InvalidConfig. A single topic is accepted (the sampler then has
  /// nothing to do); model training requires at least two.
  void validate() const;
};

/// xoshiro256** seeded through splitmix64. Its output sequence is fixed by
/// the algorithm, so runs reproduce across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) noexcept;

  bool operator==(const Rng&) const = default;

 private:
  std::uint64_t s_[4];
};

/// Assignments and sufficient statistics of a collapsed Gibbs chain.
struct TopicModelState {
  std::size_t vocab_size = 0;
  std::size_t topics = 0;
  TokenDocs docs;
  std::vector<std::vector<TopicId>> z;
  CountMatrix doc_topic;   // D x K
  CountMatrix word_topic;  // V x K
  std::vector<std::int32_t> topic_total;
  std::size_t total_tokens = 0;
  Rng rng{0};
};

/// Uniform random assignment of every token. Throws EmptyInput when there
/// are no documents or no tokens.
TopicModelState init_state(TokenDocs docs, std::size_t vocab_size,
                           const SamplerConfig& config);

/// Resample every token once, documents and tokens in order, from
/// P(z = k | rest) ∝ (n_dk + α)(n_wk + β) / (n_k + Vβ) with the token's own
/// counts removed. Throws NumericalError if the weights stop being finite
/// and positive.
void gibbs_sweep(TopicModelState& state, const SamplerConfig& config);

/// Full conditional for one token (its counts must already be removed).
/// Unnormalized weights, exposed for testing.
std::vector<double> conditional_weights(const TopicModelState& state,
                                        std::size_t doc, WordId word,
                                        const SamplerConfig& config);

/// Checks the count-conservation identities; throws NumericalError naming
/// the first one that fails.
void verify_invariants(const TopicModelState& state);

/// φ_k[w] = (n_wk + β) / (n_k + Vβ), K x V.
Matrix estimate_phi(const TopicModelState& state, double beta);
/// θ_d[k] = (n_dk + α) / (Len(d) + Kα), D x K.
Matrix estimate_theta(const TopicModelState& state, double alpha);

struct TrainResult {
  TopicModelState state;
  Matrix phi;
  Matrix theta;
};

/// Called after each sweep with the 1-based sweep number.
using SweepObserver = std::function<void(std::size_t, const TopicModelState&)>;

TrainResult train(TokenDocs docs, std::size_t vocab_size,
                  const SamplerConfig& config,
                  const SweepObserver& observer = {});

}  // namespace cwibtd
