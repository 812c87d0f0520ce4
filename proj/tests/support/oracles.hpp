#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions directly and share no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "cwibtd/corpus.hpp"

namespace cwibtd::testing {

using PairMapOracle = std::map<std::pair<WordId, WordId>, std::uint64_t>;

/// Materializes every window of every document and counts, within each
/// window, all position pairs holding different words.
inline PairMapOracle naive_pair_counts(const LabeledCorpus& corpus,
                                       std::size_t window, bool whole_doc) {
  PairMapOracle counts;
  for (const auto& doc : corpus.docs) {
    const auto& t = doc.tokens;
    const std::size_t n = t.size();
    if (n < 2) continue;
    std::vector<std::vector<WordId>> windows;
    if (whole_doc || n <= window) {
      windows.push_back(t);
    } else {
      for (std::size_t s = 0; s + window <= n; ++s) {
        windows.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(s),
                             t.begin() + static_cast<std::ptrdiff_t>(s + window));
      }
    }
    for (const auto& w : windows) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
          if (w[i] == w[j]) continue;
          counts[{std::min(w[i], w[j]), std::max(w[i], w[j])}] += 1;
        }
      }
    }
  }
  return counts;
}

/// Random corpus of `docs` documents with up to `max_len` tokens over a
/// `vocab`-word vocabulary.
inline LabeledCorpus random_corpus(std::mt19937_64& gen, std::size_t docs,
                                   std::size_t max_len, std::size_t vocab) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < vocab; ++i) words.push_back("w" + std::to_string(i));
  LabeledCorpus c;
  c.vocab = Vocabulary(words);
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc;
    const std::size_t len = gen() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
      doc.tokens.push_back(static_cast<WordId>(gen() % vocab));
    }
    c.docs.push_back(std::move(doc));
  }
  return c;
}

/// Purity by direct counting over items: for each cluster id, tally the
/// classes of its members and keep the largest tally.
inline double purity_oracle(const std::vector<std::uint32_t>& pred,
                            const std::vector<std::uint32_t>& truth) {
  std::map<std::uint32_t, std::map<std::uint32_t, std::size_t>> tallies;
  for (std::size_t i = 0; i < pred.size(); ++i) ++tallies[pred[i]][truth[i]];
  std::size_t hits = 0;
  for (const auto& [cluster, by_class] : tallies) {
    std::size_t best = 0;
    for (const auto& [cls, n] : by_class) best = std::max(best, n);
    hits += best;
  }
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

/// NMI in probability form: I(C;K) / sqrt(H(C) H(K)), 0 for a zero entropy.
inline double nmi_oracle(const std::vector<std::uint32_t>& pred,
                         const std::vector<std::uint32_t>& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<std::uint32_t, std::size_t> nc;
  std::map<std::uint32_t, std::size_t> nt;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> nj;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++nc[pred[i]];
    ++nt[truth[i]];
    ++nj[{truth[i], pred[i]}];
  }
  std::map<std::uint32_t, double> pc;
  std::map<std::uint32_t, double> pt;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  for (const auto& [k, c] : nc) pc[k] = static_cast<double>(c) / n;
  for (const auto& [k, c] : nt) pt[k] = static_cast<double>(c) / n;
  for (const auto& [k, c] : nj) joint[k] = static_cast<double>(c) / n;
  double hc = 0.0;
  double ht = 0.0;
  for (const auto& [k, p] : pc) hc -= p * std::log(p);
  for (const auto& [k, p] : pt) ht -= p * std::log(p);
  if (hc <= 0.0 || ht <= 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, p] : joint) {
    mi += p * std::log(p / (pt[key.first] * pc[key.second]));
  }
  return mi / std::sqrt(hc * ht);
}

/// All labelings of n items into at most `blocks` blocks, one per set
/// partition (restricted growth strings). Label renaming is covered by the
/// permutation-invariance tests.
inline std::vector<std::vector<std::uint32_t>> set_partitions(std::size_t n,
                                                              std::uint32_t blocks) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t used) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t b = 0; b <= used && b < blocks; ++b) {
      cur[i] = b;
      self(self, i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) return out;
  cur[0] = 0;
  rec(rec, 1, 1);
  return out;
}

}  // namespace cwibtd::testing
