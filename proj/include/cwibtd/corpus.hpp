#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cwibtd {

using WordId = std::uint32_t;
using ClassId = std::uint32_t;

using TokenList = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

/// Tokenizer and vocabulary filtering options.
///
/// Tokenization lowercases ASCII letters and splits on ASCII whitespace and
/// on every ASCII punctuation character (the `std::ispunct` set in the C
/// locale: !"#$%&'()*+,-./:;<=>?@[\]^_`{|}~). Bytes >= 0x80 are kept
/// verbatim so UTF-8 words survive intact. Stopwords are matched after
/// lowercasing.
struct PreprocessConfig {
  std::size_t min_count = 2;
  bool lowercase = true;
  bool use_default_stopwords = true;
  std::string stopword_path;  // extra stopwords, one per line
  std::string keep_chars;     // punctuation characters to keep inside tokens

  /// Default list (if enabled) plus the words from `stopword_path`.
  StopwordSet stopwords() const;
};

/// Bundled English stopword list.
const StopwordSet& default_stopwords();

std::vector<std::string> tokenize(std::string_view raw_text,
                                  const PreprocessConfig& config = {});

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const noexcept { return words_.size(); }
  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::optional<WordId> find(std::string_view word) const;

  /// FNV-1a over the newline-joined word list; identifies a vocabulary in
  /// model artifacts.
  std::uint64_t hash() const noexcept;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

/// Keeps tokens with corpus frequency >= min_count that are not stopwords.
/// Ids follow first occurrence. Throws EmptyVocabulary when nothing survives.
Vocabulary build_vocabulary(const std::vector<TokenList>& docs,
                            std::size_t min_count,
                            const StopwordSet& stopwords);

struct Document {
  std::vector<WordId> tokens;
  /// Set when out-of-vocabulary filtering left the document with no tokens.
  bool emptied = false;

  std::size_t length() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
};

struct LabeledCorpus {
  Vocabulary vocab;
  std::vector<Document> docs;
  std::vector<ClassId> labels;  // empty for unlabeled corpora
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return docs.size(); }
  std::size_t num_classes() const noexcept { return class_names.size(); }
  bool labeled() const noexcept { return !labels.empty(); }
  std::size_t total_tokens() const noexcept;

  /// Throws LabelMismatch if labels and docs disagree or a label is out of range.
  void validate() const;
};

/// Table-style corpus summary: N, V, mean and max document length.
struct CorpusStats {
  std::size_t num_docs = 0;
  std::size_t vocab_size = 0;
  std::size_t num_classes = 0;
  std::size_t total_tokens = 0;
  std::size_t empty_docs = 0;
  double mean_length = 0.0;
  std::size_t max_length = 0;
};

CorpusStats corpus_stats(const LabeledCorpus& corpus);

/// Drops out-of-vocabulary tokens. Labels, when given, are class ids into
/// `class_names`. Throws LabelMismatch on length mismatch.
LabeledCorpus encode_corpus(const std::vector<TokenList>& docs,
                            const std::optional<std::vector<ClassId>>& labels,
                            const Vocabulary& vocab,
                            std::vector<std::string> class_names = {});

std::vector<TokenList> decode_corpus(const LabeledCorpus& corpus);

/// First `per_large` documents of each large class followed by the first
/// `per_rare` of each rare class, in original corpus order within a class.
/// Class ids and names are preserved. Throws InsufficientClassSize.
LabeledCorpus make_imbalanced_subset(const LabeledCorpus& corpus,
                                     const std::vector<ClassId>& large_classes,
                                     std::size_t per_large,
                                     const std::vector<ClassId>& rare_classes,
                                     std::size_t per_rare);

enum class CorpusFormat { labeled, unlabeled };

CorpusFormat parse_corpus_format(std::string_view name);

struct RawCorpus {
  std::vector<std::string> texts;
  std::vector<ClassId> labels;
  std::vector<std::string> class_names;
};

/// Labeled: `<class-name>\t<text>` per line. Unlabeled: `<text>` per line.
/// Blank lines are skipped. Throws IoError or ParseError (with line number).
RawCorpus load_labeled_corpus(const std::string& path, CorpusFormat format);

/// Which classes to keep, and how many leading documents of each.
struct SubsetSpec {
  std::vector<std::string> large_classes;
  std::size_t per_large = 300;
  std::vector<std::string> rare_classes;
  std::size_t per_rare = 20;
};

/// Tokenize, filter and encode a raw corpus in one step. With a subset, the
/// documents are selected first and the vocabulary is built over the
/// selected documents only.
LabeledCorpus preprocess(const RawCorpus& raw, const PreprocessConfig& config,
                         const std::optional<SubsetSpec>& subset = {});

/// Encode texts against an existing vocabulary (no vocabulary rebuild).
LabeledCorpus encode_with(const RawCorpus& raw, const Vocabulary& vocab,
                          const PreprocessConfig& config);

/// Maps class names to ids; throws UnknownClass for names not in the corpus.
std::vector<ClassId> resolve_classes(const LabeledCorpus& corpus,
                                     const std::vector<std::string>& names);

}  // namespace cwibtd
