#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cwibtd/conet.hpp"

namespace cwibtd {

enum class PseudoDocMode {
  count,       // multiplicity = raw co-occurrence count
  pmi_scaled,  // multiplicity = max(1, round_half_even(scale * activity))
};

const char* to_string(PseudoDocMode mode) noexcept;

struct NeighborCount {
  WordId word = 0;
  std::uint32_t count = 0;
  bool operator==(const NeighborCount&) const = default;
};

/// The adjacency list of one word rendered as a bag of neighbor words.
struct PseudoDocument {
  WordId origin = 0;
  std::vector<NeighborCount> neighbors;  // sorted by word id

  std::size_t length() const noexcept;
  std::optional<std::uint32_t> multiplicity(WordId neighbor) const;
  /// Neighbors expanded into a token sequence, in id order.
  std::vector<WordId> tokens() const;
};

/// One pseudo-document per word that has at least one edge, in word-id order.
class PseudoDocumentSet {
 public:
  PseudoDocumentSet() = default;
  PseudoDocumentSet(std::size_t num_words, PseudoDocMode mode, double scale,
                    std::vector<PseudoDocument> docs);

  PseudoDocMode mode() const noexcept { return mode_; }
  double scale() const noexcept { return scale_; }
  std::size_t num_words() const noexcept { return num_words_; }
  std::size_t size() const noexcept { return docs_.size(); }
  const std::vector<PseudoDocument>& docs() const noexcept { return docs_; }
  const PseudoDocument& operator[](std::size_t i) const { return docs_.at(i); }

  /// Row of the pseudo-document for `word`, if that word has one.
  std::optional<std::size_t> row_of(WordId word) const;
  std::size_t total_tokens() const noexcept;
  std::vector<std::vector<WordId>> token_lists() const;

 private:
  std::size_t num_words_ = 0;
  PseudoDocMode mode_ = PseudoDocMode::count;
  double scale_ = 1.0;
  std::vector<PseudoDocument> docs_;
  std::vector<std::int64_t> row_;  // word -> row, -1 if none
};

/// Count mode over the unpruned network (the WNTM construction).
PseudoDocumentSet build_pseudo_docs(const RawCoNetwork& net);

/// PMI-scaled mode over the pruned network. Throws InvalidScale if scale <= 0.
PseudoDocumentSet build_pseudo_docs(const PrunedCoNetwork& net, double scale);

/// Integer multiplicity for a positive activity.
std::uint32_t scaled_multiplicity(double activity, double scale);

/// `origin \t neighbor:count neighbor:count ...`, one pseudo-document per line.
void write_pseudo_docs(std::ostream& out, const PseudoDocumentSet& set,
                       const Vocabulary& vocab);

}  // namespace cwibtd
