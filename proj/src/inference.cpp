#include "cwibtd/inference.hpp"

#include <cstdio>
#include <map>
#include <ostream>

#include "cwibtd/error.hpp"

namespace cwibtd {

WordTopicTable::WordTopicTable(const Matrix& theta,
                               const std::vector<WordId>& row_words,
                               std::size_t vocab_size)
    : theta_(&theta), row_(vocab_size, -1) {
  if (row_words.size() != theta.rows()) {
    throw FormatError("theta has " + std::to_string(theta.rows()) +
                      " rows but " + std::to_string(row_words.size()) +
                      " row words");
  }
  for (std::size_t r = 0; r < row_words.size(); ++r) {
    if (row_words[r] >= vocab_size) throw FormatError("theta row word out of range");
    row_[row_words[r]] = static_cast<std::int64_t>(r);
  }
}

std::span<const double> WordTopicTable::topics_of(WordId word) const {
  if (word >= row_.size() || row_[word] < 0) return {};
  return theta_->row(static_cast<std::size_t>(row_[word]));
}

namespace {

DocTopicDistribution uniform(std::size_t K) {
  DocTopicDistribution out;
  out.p.assign(K, 1.0 / static_cast<double>(K));
  out.raw.assign(K, 0.0);
  out.coverage = 0.0;
  out.no_signal = true;
  return out;
}

}  // namespace

DocTopicDistribution infer_doc_topics(const Document& doc,
                                      const WordTopicTable& table) {
  const std::size_t K = table.topics();
  if (doc.empty()) return uniform(K);

  std::map<WordId, std::size_t> freq;
  for (WordId w : doc.tokens) ++freq[w];

  const double len = static_cast<double>(doc.length());
  DocTopicDistribution out;
  out.raw.assign(K, 0.0);
  std::size_t covered = 0;
  for (const auto& [w, n] : freq) {
    auto row = table.topics_of(w);
    if (row.empty()) continue;
    covered += n;
    const double weight = static_cast<double>(n) / len;
    for (std::size_t k = 0; k < K; ++k) out.raw[k] += row[k] * weight;
  }
  if (covered == 0) return uniform(K);

  out.coverage = static_cast<double>(covered) / len;
  double mass = 0.0;
  for (double v : out.raw) mass += v;
  out.p.resize(K);
  for (std::size_t k = 0; k < K; ++k) out.p[k] = out.raw[k] / mass;
  return out;
}

DocTopicDistribution from_theta_row(std::span<const double> row,
                                    std::size_t doc_length) {
  DocTopicDistribution out;
  out.p.assign(row.begin(), row.end());
  out.raw = out.p;
  out.coverage = doc_length > 0 ? 1.0 : 0.0;
  out.no_signal = doc_length == 0;
  return out;
}

TopicId assign_cluster(std::span<const double> p) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] > p[best]) best = k;
  }
  return static_cast<TopicId>(best);
}

TopicId assign_cluster(const DocTopicDistribution& dist) {
  return assign_cluster(dist.p);
}

void write_inference_line(std::ostream& out, std::size_t doc_index,
                          const DocTopicDistribution& dist) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", dist.coverage);
  out << doc_index << '\t' << assign_cluster(dist) << '\t' << buf << '\t';
  for (std::size_t k = 0; k < dist.p.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.6f", dist.p[k]);
    if (k) out << ' ';
    out << buf;
  }
  out << '\n';
}

}  // namespace cwibtd
