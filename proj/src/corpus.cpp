#include "cwibtd/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "cwibtd/error.hpp"
#include "cwibtd/hash.hpp"

namespace cwibtd {

namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
         (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

StopwordSet PreprocessConfig::stopwords() const {
  StopwordSet words;
  if (use_default_stopwords) words = default_stopwords();
  if (!stopword_path.empty()) {
    std::ifstream in(stopword_path);
    if (!in) throw IoError("cannot open stopword file " + stopword_path);
    std::string line;
    while (std::getline(in, line)) {
      for (auto& token : tokenize(strip_cr(line), *this)) {
        words.insert(std::move(token));
      }
    }
  }
  return words;
}

std::vector<std::string> tokenize(std::string_view raw_text,
                                  const PreprocessConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : raw_text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_ascii_space(c)) {
      flush();
    } else if (is_ascii_punct(c) &&
               config.keep_chars.find(ch) == std::string::npos) {
      flush();
    } else {
      if (config.lowercase && c >= 'A' && c <= 'Z') {
        ch = static_cast<char>(c - 'A' + 'a');
      }
      current.push_back(ch);
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> words)
    : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto [it, inserted] = index_.emplace(words_[i], static_cast<WordId>(i));
    if (!inserted) throw FormatError("duplicate vocabulary word: " + words_[i]);
  }
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::hash() const noexcept {
  Fnv1a h;
  for (const auto& w : words_) {
    h.update(w);
    h.update("\n");
  }
  return h.digest();
}

Vocabulary build_vocabulary(const std::vector<TokenList>& docs,
                            std::size_t min_count,
                            const StopwordSet& stopwords) {
  if (min_count < 1) throw InvalidConfig("min_count must be >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& doc : docs) {
    for (const auto& token : doc) {
      if (stopwords.count(token)) continue;
      auto [it, inserted] = counts.emplace(token, 0);
      if (inserted) order.push_back(token);
      ++it->second;
    }
  }
  std::vector<std::string> kept;
  for (auto& word : order) {
    if (counts[word] >= min_count) kept.push_back(std::move(word));
  }
  if (kept.empty()) throw EmptyVocabulary("no token survives vocabulary filtering");
  return Vocabulary(std::move(kept));
}

std::size_t LabeledCorpus::total_tokens() const noexcept {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.length();
  return n;
}

void LabeledCorpus::validate() const {
  if (!labels.empty() && labels.size() != docs.size()) {
    throw LabelMismatch("corpus has " + std::to_string(docs.size()) +
                        " documents but " + std::to_string(labels.size()) +
                        " labels");
  }
  for (ClassId label : labels) {
    if (label >= class_names.size()) {
      throw LabelMismatch("label " + std::to_string(label) +
                          " out of range for " +
                          std::to_string(class_names.size()) + " classes");
    }
  }
  for (const auto& doc : docs) {
    for (WordId w : doc.tokens) {
      if (w >= vocab.size()) throw FormatError("token id out of vocabulary range");
    }
  }
}

CorpusStats corpus_stats(const LabeledCorpus& corpus) {
  CorpusStats s;
  s.num_docs = corpus.size();
  s.vocab_size = corpus.vocab.size();
  s.num_classes = corpus.num_classes();
  for (const auto& d : corpus.docs) {
    s.total_tokens += d.length();
    s.max_length = std::max(s.max_length, d.length());
    if (d.empty()) ++s.empty_docs;
  }
  if (s.num_docs > 0) {
    s.mean_length = static_cast<double>(s.total_tokens) /
                    static_cast<double>(s.num_docs);
  }
  return s;
}

LabeledCorpus encode_corpus(const std::vector<TokenList>& docs,
                            const std::optional<std::vector<ClassId>>& labels,
                            const Vocabulary& vocab,
                            std::vector<std::string> class_names) {
  if (labels && labels->size() != docs.size()) {
    throw LabelMismatch("got " + std::to_string(docs.size()) +
                        " documents but " + std::to_string(labels->size()) +
                        " labels");
  }
  LabeledCorpus out;
  out.vocab = vocab;
  out.class_names = std::move(class_names);
  out.docs.reserve(docs.size());
  for (const auto& tokens : docs) {
    Document d;
    for (const auto& t : tokens) {
      if (auto id = vocab.find(t)) d.tokens.push_back(*id);
    }
    d.emptied = d.tokens.empty();
    out.docs.push_back(std::move(d));
  }
  if (labels) {
    out.labels = *labels;
    if (out.class_names.empty()) {
      ClassId max_label = 0;
      for (ClassId l : out.labels) max_label = std::max(max_label, l);
      if (!out.labels.empty()) {
        for (ClassId c = 0; c <= max_label; ++c) {
          out.class_names.push_back(std::to_string(c));
        }
      }
    }
  }
  out.validate();
  return out;
}

std::vector<TokenList> decode_corpus(const LabeledCorpus& corpus) {
  std::vector<TokenList> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus.docs) {
    TokenList tokens;
    tokens.reserve(d.length());
    for (WordId w : d.tokens) tokens.push_back(corpus.vocab.word(w));
    out.push_back(std::move(tokens));
  }
  return out;
}

LabeledCorpus make_imbalanced_subset(const LabeledCorpus& corpus,
                                     const std::vector<ClassId>& large_classes,
                                     std::size_t per_large,
                                     const std::vector<ClassId>& rare_classes,
                                     std::size_t per_rare) {
  if (!corpus.labeled()) throw LabelMismatch("subset requires a labeled corpus");
  std::vector<ClassId> seen;
  auto check_class = [&](ClassId c) {
    if (c >= corpus.num_classes()) {
      throw UnknownClass("class id " + std::to_string(c) + " not in corpus");
    }
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) {
      throw InvalidConfig("class '" + corpus.class_names[c] +
                          "' listed more than once");
    }
    seen.push_back(c);
  };
  for (ClassId c : large_classes) check_class(c);
  for (ClassId c : rare_classes) check_class(c);

  std::vector<std::vector<std::size_t>> members(corpus.num_classes());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    members[corpus.labels[i]].push_back(i);
  }

  LabeledCorpus out;
  out.vocab = corpus.vocab;
  out.class_names = corpus.class_names;
  auto take = [&](ClassId c, std::size_t n) {
    if (members[c].size() < n) {
      throw InsufficientClassSize(
          "class '" + corpus.class_names[c] + "' has " +
          std::to_string(members[c].size()) + " documents, " +
          std::to_string(n) + " requested");
    }
    for (std::size_t k = 0; k < n; ++k) {
      out.docs.push_back(corpus.docs[members[c][k]]);
      out.labels.push_back(c);
    }
  };
  for (ClassId c : large_classes) take(c, per_large);
  for (ClassId c : rare_classes) take(c, per_rare);
  return out;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "labeled" || name == "tsv") return CorpusFormat::labeled;
  if (name == "unlabeled" || name == "text") return CorpusFormat::unlabeled;
  throw InvalidConfig("unknown corpus format '" + std::string(name) + "'");
}

RawCorpus load_labeled_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  RawCorpus raw;
  std::map<std::string, ClassId> class_index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (format == CorpusFormat::unlabeled) {
      raw.texts.push_back(line);
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path, lineno, "expected '<class>\\t<text>'");
    }
    std::string name = line.substr(0, tab);
    if (name.empty()) throw ParseError(path, lineno, "empty class name");
    auto [it, inserted] =
        class_index.emplace(name, static_cast<ClassId>(raw.class_names.size()));
    if (inserted) raw.class_names.push_back(name);
    raw.labels.push_back(it->second);
    raw.texts.push_back(line.substr(tab + 1));
  }
  if (in.bad()) throw IoError("read error on " + path);
  return raw;
}

namespace {

std::vector<TokenList> tokenize_all(const RawCorpus& raw,
                                    const PreprocessConfig& config) {
  std::vector<TokenList> docs;
  docs.reserve(raw.texts.size());
  for (const auto& text : raw.texts) docs.push_back(tokenize(text, config));
  return docs;
}

std::optional<std::vector<ClassId>> optional_labels(const RawCorpus& raw) {
  if (raw.labels.empty()) return std::nullopt;
  return raw.labels;
}

}  // namespace

LabeledCorpus preprocess(const RawCorpus& raw, const PreprocessConfig& config,
                         const std::optional<SubsetSpec>& subset) {
  auto docs = tokenize_all(raw, config);
  auto labels = optional_labels(raw);
  auto stopwords = config.stopwords();

  if (subset) {
    // Select on an unfiltered encoding so nothing is lost before the real
    // vocabulary is built over the selected documents.
    auto full = encode_corpus(docs, labels, build_vocabulary(docs, 1, {}),
                              raw.class_names);
    auto picked = make_imbalanced_subset(
        full, resolve_classes(full, subset->large_classes), subset->per_large,
        resolve_classes(full, subset->rare_classes), subset->per_rare);
    docs = decode_corpus(picked);
    labels = picked.labels;
  }

  auto vocab = build_vocabulary(docs, config.min_count, stopwords);
  return encode_corpus(docs, labels, vocab, raw.class_names);
}

LabeledCorpus encode_with(const RawCorpus& raw, const Vocabulary& vocab,
                          const PreprocessConfig& config) {
  return encode_corpus(tokenize_all(raw, config), optional_labels(raw), vocab,
                       raw.class_names);
}

std::vector<ClassId> resolve_classes(const LabeledCorpus& corpus,
                                     const std::vector<std::string>& names) {
  std::vector<ClassId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) {
    auto it = std::find(corpus.class_names.begin(), corpus.class_names.end(), name);
    if (it == corpus.class_names.end()) {
      throw UnknownClass("unknown class '" + name + "'");
    }
    ids.push_back(static_cast<ClassId>(it - corpus.class_names.begin()));
  }
  return ids;
}

}  // namespace cwibtd
