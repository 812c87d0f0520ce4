#pragma once

// Synthetic labeled short-text corpora with known class structure.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cwibtd/corpus.hpp"
#include "cwibtd/sampler.hpp"

namespace cwibtd::testing {

struct SyntheticClass {
  std::string name;
  std::size_t docs = 0;
  bool rare = false;
};

struct SyntheticSpec {
  std::vector<SyntheticClass> classes;
  std::size_t words_per_class = 50;  // private vocabulary of each class
  std::size_t shared_words = 0;      // vocabulary common to all classes
  double shared_rate = 0.0;          // probability a token is a shared word
  std::size_t rare_shared_words = 0; // vocabulary common to the rare classes
  double rare_shared_rate = 0.0;     // probability a rare-class token uses it
  double zipf_exponent = 0.0;        // 0: uniform word choice
  std::size_t min_len = 8;
  std::size_t max_len = 12;
  std::uint64_t seed = 7;
};

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
      cdf_[i] = total;
    }
    for (auto& c : cdf_) c /= total;
  }
  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform();
    std::size_t i = 0;
    while (i + 1 < cdf_.size() && cdf_[i] <= u) ++i;
    return i;
  }

 private:
  std::vector<double> cdf_;
};

/// Documents of class c draw from words "c<c>w<i>" and, with probability
/// `shared_rate`, from the shared words "s<i>"; rare classes additionally
/// use the words "r<i>" with probability `rare_shared_rate`. Classes appear in blocks,
/// in the order given.
inline RawCorpus make_synthetic(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  ZipfSampler own(spec.words_per_class, spec.zipf_exponent);
  ZipfSampler shared(spec.shared_words == 0 ? 1 : spec.shared_words,
                     spec.zipf_exponent);
  ZipfSampler rare_shared(spec.rare_shared_words == 0 ? 1 : spec.rare_shared_words,
                          spec.zipf_exponent);
  RawCorpus raw;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    raw.class_names.push_back(spec.classes[c].name);
    for (std::size_t d = 0; d < spec.classes[c].docs; ++d) {
      const std::size_t len =
          spec.min_len + rng.below(spec.max_len - spec.min_len + 1);
      std::string text;
      for (std::size_t i = 0; i < len; ++i) {
        if (i) text += ' ';
        const double u = rng.uniform();
        if (spec.shared_words > 0 && u < spec.shared_rate) {
          text += "s" + std::to_string(shared.draw(rng));
        } else if (spec.classes[c].rare && spec.rare_shared_words > 0 &&
                   u < spec.shared_rate + spec.rare_shared_rate) {
          text += "r" + std::to_string(rare_shared.draw(rng));
        } else {
          text += "c" + std::to_string(c) + "w" + std::to_string(own.draw(rng));
        }
      }
      raw.texts.push_back(std::move(text));
      raw.labels.push_back(static_cast<ClassId>(c));
    }
  }
  return raw;
}

inline PreprocessConfig synthetic_preprocess() {
  PreprocessConfig config;
  config.min_count = 1;
  config.use_default_stopwords = false;
  return config;
}

/// Two classes with disjoint 50-word vocabularies, 100 documents each.
inline SyntheticSpec two_topic_spec(std::uint64_t seed = 11) {
  SyntheticSpec spec;
  spec.classes = {{"A", 100}, {"B", 100}};
  spec.words_per_class = 50;
  spec.min_len = 8;
  spec.max_len = 12;
  spec.seed = seed;
  return spec;
}

/// Four large classes of 300 documents and four rare classes of 20,
/// all drawing part of their tokens from a shared vocabulary. The rare
/// classes also overlap with each other through a smaller common vocabulary.
inline SyntheticSpec imbalanced_spec(std::uint64_t seed = 2024) {
  SyntheticSpec spec;
  for (int c = 0; c < 4; ++c) spec.classes.push_back({"large" + std::to_string(c), 300});
  for (int c = 0; c < 4; ++c) spec.classes.push_back({"rare" + std::to_string(c), 20, true});
  spec.words_per_class = 40;
  spec.shared_words = 30;
  spec.shared_rate = 0.4;
  spec.rare_shared_words = 20;
  spec.rare_shared_rate = 0.3;
  spec.zipf_exponent = 1.0;
  spec.min_len = 8;
  spec.max_len = 16;
  spec.seed = seed;
  return spec;
}

inline std::vector<std::string> rare_class_names() {
  return {"rare0", "rare1", "rare2", "rare3"};
}

}  // namespace cwibtd::testing
