#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cwibtd/corpus.hpp"

namespace cwibtd {

/// How a document is cut into co-occurrence contexts.
enum class WindowMode {
  sliding,   // windows of length L at stride 1
  document,  // the whole document is one window
};

WindowMode parse_window_mode(std::string_view name);
const char* to_string(WindowMode mode) noexcept;

/// Half-open token index range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

/// Windows of length `window_size` at stride 1. A document no longer than
/// the window is a single window; documents with fewer than two tokens have
/// none.
std::vector<Span> enumerate_windows(std::size_t doc_length,
                                    std::size_t window_size);

struct PairCount {
  WordId x = 0;  // x < y
  WordId y = 0;
  std::uint64_t weight = 0;
  bool operator==(const PairCount&) const = default;
};

/// Sliding-window co-occurrence counts before any scoring.
///
/// Edges are stored once, with x < y, sorted by (x, y). `incident(x)` is the
/// summed weight of every edge touching x, and `total_weight()` the summed
/// weight of all edges, so sum_x incident(x) == 2 * total_weight().
class RawCoNetwork {
 public:
  RawCoNetwork() = default;
  RawCoNetwork(std::size_t num_words, std::size_t window_size,
               std::vector<PairCount> edges);

  std::size_t num_words() const noexcept { return incident_.size(); }
  std::size_t window_size() const noexcept { return window_size_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<PairCount>& edges() const noexcept { return edges_; }

  /// D(x, y); zero when there is no edge. Symmetric.
  std::uint64_t weight(WordId x, WordId y) const;
  std::uint64_t incident(WordId x) const { return incident_.at(x); }
  std::uint64_t total_weight() const noexcept { return total_; }

  /// Number of words with at least one edge.
  std::size_t num_connected_words() const;

  /// Sums edge weights; both networks must have the same word count.
  RawCoNetwork merged(const RawCoNetwork& other) const;

  bool operator==(const RawCoNetwork&) const = default;

 private:
  std::size_t window_size_ = 0;
  std::vector<PairCount> edges_;
  std::vector<std::uint64_t> incident_;
  std::uint64_t total_ = 0;
};

/// Each window contributes +1 for every pair of token positions holding
/// two different words. Adjacent positions share more windows and so
/// accumulate more weight. With `threads > 1` documents are split across
/// workers whose partial networks are summed.
RawCoNetwork accumulate_pair_counts(const LabeledCorpus& corpus,
                                    std::size_t window_size,
                                    WindowMode mode = WindowMode::sliding,
                                    unsigned threads = 1);

/// Pointwise mutual information of an existing edge:
/// ln( p(x,y) / (p(x) p(y)) ) with p(x,y) = D(x,y)/T and p(x) = m(x)/(2T).
/// Throws UndefinedActivity when D(x, y) == 0.
double pmi_degree(WordId x, WordId y, const RawCoNetwork& net);

/// Same estimator from bare statistics.
double pmi_from_counts(std::uint64_t pair_weight, std::uint64_t incident_x,
                       std::uint64_t incident_y, std::uint64_t total_weight);

struct ScoredEdge {
  WordId x = 0;  // x < y
  WordId y = 0;
  std::uint64_t weight = 0;
  double activity = 0.0;
};

/// Edges whose PMI activity is strictly positive.
class PrunedCoNetwork {
 public:
  PrunedCoNetwork() = default;
  PrunedCoNetwork(std::size_t num_words, std::size_t raw_edge_count,
                  std::uint64_t raw_total_weight, std::vector<ScoredEdge> edges);

  std::size_t num_words() const noexcept { return num_words_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<ScoredEdge>& edges() const noexcept { return edges_; }

  /// Activity of (x, y); zero when the edge was pruned or never existed.
  double activity(WordId x, WordId y) const;
  std::size_t num_connected_words() const;

  std::size_t raw_edge_count() const noexcept { return raw_edge_count_; }
  std::uint64_t raw_total_weight() const noexcept { return raw_total_weight_; }

 private:
  std::size_t num_words_ = 0;
  std::size_t raw_edge_count_ = 0;
  std::uint64_t raw_total_weight_ = 0;
  std::vector<ScoredEdge> edges_;
};

PrunedCoNetwork prune(const RawCoNetwork& net);

/// `word_x \t word_y \t D \t activity` per edge, sorted by (x, y) id.
void write_network(std::ostream& out, const RawCoNetwork& net,
                   const Vocabulary& vocab);
void write_network(std::ostream& out, const PrunedCoNetwork& net,
                   const Vocabulary& vocab);

}  // namespace cwibtd
