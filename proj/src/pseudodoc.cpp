#include "cwibtd/pseudodoc.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <limits>
#include <ostream>

#include "cwibtd/error.hpp"

namespace cwibtd {

const char* to_string(PseudoDocMode mode) noexcept {
  return mode == PseudoDocMode::count ? "count" : "pmi-scaled";
}

std::size_t PseudoDocument::length() const noexcept {
  std::size_t n = 0;
  for (const auto& nb : neighbors) n += nb.count;
  return n;
}

std::optional<std::uint32_t> PseudoDocument::multiplicity(WordId neighbor) const {
  auto it = std::lower_bound(
      neighbors.begin(), neighbors.end(), neighbor,
      [](const NeighborCount& nb, WordId w) { return nb.word < w; });
  if (it == neighbors.end() || it->word != neighbor) return std::nullopt;
  return it->count;
}

std::vector<WordId> PseudoDocument::tokens() const {
  std::vector<WordId> out;
  out.reserve(length());
  for (const auto& nb : neighbors) out.insert(out.end(), nb.count, nb.word);
  return out;
}

PseudoDocumentSet::PseudoDocumentSet(std::size_t num_words, PseudoDocMode mode,
                                     double scale,
                                     std::vector<PseudoDocument> docs)
    : num_words_(num_words),
      mode_(mode),
      scale_(scale),
      docs_(std::move(docs)),
      row_(num_words, -1) {
  for (std::size_t r = 0; r < docs_.size(); ++r) {
    const auto w = docs_[r].origin;
    if (w >= num_words_ || row_[w] != -1) {
      throw FormatError("bad pseudo-document origin " + std::to_string(w));
    }
    row_[w] = static_cast<std::int64_t>(r);
  }
}

std::optional<std::size_t> PseudoDocumentSet::row_of(WordId word) const {
  if (word >= row_.size() || row_[word] < 0) return std::nullopt;
  return static_cast<std::size_t>(row_[word]);
}

std::size_t PseudoDocumentSet::total_tokens() const noexcept {
  std::size_t n = 0;
  for (const auto& d : docs_) n += d.length();
  return n;
}

std::vector<std::vector<WordId>> PseudoDocumentSet::token_lists() const {
  std::vector<std::vector<WordId>> out;
  out.reserve(docs_.size());
  for (const auto& d : docs_) out.push_back(d.tokens());
  return out;
}

std::uint32_t scaled_multiplicity(double activity, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidScale("scale must be a positive finite number");
  }
  // Ties go to even under the default rounding mode.
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double r = std::nearbyint(scale * activity);
  std::fesetround(saved);
  if (!(r < static_cast<double>(std::numeric_limits<std::uint32_t>::max()))) {
    throw NumericalError("scaled multiplicity overflows");
  }
  return r < 1.0 ? 1U : static_cast<std::uint32_t>(r);
}

namespace {

template <class Edge, class CountFn>
PseudoDocumentSet assemble(std::size_t num_words, const std::vector<Edge>& edges,
                           PseudoDocMode mode, double scale, CountFn count_of) {
  std::vector<std::vector<NeighborCount>> adj(num_words);
  for (const auto& e : edges) {
    const std::uint32_t c = count_of(e);
    adj[e.x].push_back({e.y, c});
    adj[e.y].push_back({e.x, c});
  }
  std::vector<PseudoDocument> docs;
  for (WordId w = 0; w < num_words; ++w) {
    if (adj[w].empty()) continue;
    std::sort(adj[w].begin(), adj[w].end(),
              [](const auto& a, const auto& b) { return a.word < b.word; });
    docs.push_back({w, std::move(adj[w])});
  }
  return PseudoDocumentSet(num_words, mode, scale, std::move(docs));
}

}  // namespace

PseudoDocumentSet build_pseudo_docs(const RawCoNetwork& net) {
  return assemble(net.num_words(), net.edges(), PseudoDocMode::count, 1.0,
                  [](const PairCount& e) {
                    if (e.weight > std::numeric_limits<std::uint32_t>::max()) {
                      throw NumericalError("edge weight overflows multiplicity");
                    }
                    return static_cast<std::uint32_t>(e.weight);
                  });
}

PseudoDocumentSet build_pseudo_docs(const PrunedCoNetwork& net, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidScale("scale must be a positive finite number");
  }
  return assemble(net.num_words(), net.edges(), PseudoDocMode::pmi_scaled, scale,
                  [scale](const ScoredEdge& e) {
                    return scaled_multiplicity(e.activity, scale);
                  });
}

void write_pseudo_docs(std::ostream& out, const PseudoDocumentSet& set,
                       const Vocabulary& vocab) {
  for (const auto& d : set.docs()) {
    out << vocab.word(d.origin) << '\t';
    for (std::size_t i = 0; i < d.neighbors.size(); ++i) {
      if (i) out << ' ';
      out << vocab.word(d.neighbors[i].word) << ':' << d.neighbors[i].count;
    }
    out << '\n';
  }
}

}  // namespace cwibtd
