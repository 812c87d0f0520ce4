#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cwibtd/corpus.hpp"
#include "cwibtd/matrix.hpp"
#include "cwibtd/sampler.hpp"

namespace cwibtd {

/// P(z | w) for the words that own a row of a network model's θ.
class WordTopicTable {
 public:
  WordTopicTable(const Matrix& theta, const std::vector<WordId>& row_words,
                 std::size_t vocab_size);

  std::size_t topics() const noexcept { return theta_->cols(); }
  std::size_t vocab_size() const noexcept { return row_.size(); }
  /// Empty span for words without a pseudo-document.
  std::span<const double> topics_of(WordId word) const;

 private:
  const Matrix* theta_;
  std::vector<std::int64_t> row_;
};

struct DocTopicDistribution {
  std::vector<double> p;        // renormalized over covered mass
  std::vector<double> raw;      // sum_i θ_{i,z} n_d(w_i) / Len(d), covered words only
  double coverage = 0.0;        // covered tokens / Len(d)
  bool no_signal = false;       // no covered token; p is uniform
};

/// P(z|d) = Σ_i P(z|w_i) n_d(w_i)/Len(d) over the words of `doc` that have a
/// topic row, renormalized by the covered mass.
DocTopicDistribution infer_doc_topics(const Document& doc,
                                      const WordTopicTable& table);

/// Wraps an already-normalized distribution (e.g. an LDA θ_d row).
DocTopicDistribution from_theta_row(std::span<const double> row,
                                    std::size_t doc_length);

/// Argmax; ties go to the lowest topic id.
TopicId assign_cluster(const DocTopicDistribution& dist);
TopicId assign_cluster(std::span<const double> p);

/// `doc_index \t cluster \t coverage \t p_0 p_1 ... p_{K-1}` with six decimals.
void write_inference_line(std::ostream& out, std::size_t doc_index,
                          const DocTopicDistribution& dist);

}  // namespace cwibtd
