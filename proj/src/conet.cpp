#include "cwibtd/conet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "cwibtd/error.hpp"

namespace cwibtd {

WindowMode parse_window_mode(std::string_view name) {
  if (name == "sliding") return WindowMode::sliding;
  if (name == "document") return WindowMode::document;
  throw InvalidConfig("unknown window mode '" + std::string(name) + "'");
}

const char* to_string(WindowMode mode) noexcept {
  return mode == WindowMode::sliding ? "sliding" : "document";
}

std::vector<Span> enumerate_windows(std::size_t doc_length,
                                    std::size_t window_size) {
  if (window_size < 2) throw InvalidConfig("window size must be >= 2");
  std::vector<Span> spans;
  if (doc_length < 2) return spans;
  if (doc_length <= window_size) {
    spans.push_back({0, doc_length});
    return spans;
  }
  spans.reserve(doc_length - window_size + 1);
  for (std::size_t s = 0; s + window_size <= doc_length; ++s) {
    spans.push_back({s, s + window_size});
  }
  return spans;
}

RawCoNetwork::RawCoNetwork(std::size_t num_words, std::size_t window_size,
                           std::vector<PairCount> edges)
    : window_size_(window_size),
      edges_(std::move(edges)),
      incident_(num_words, 0) {
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.x >= e.y) throw FormatError("edge endpoints must satisfy x < y");
    if (e.y >= num_words) throw FormatError("edge endpoint out of range");
    if (e.weight == 0) throw FormatError("zero-weight edge");
    if (i > 0 && edges_[i - 1].x == e.x && edges_[i - 1].y == e.y) {
      throw FormatError("duplicate edge");
    }
    incident_[e.x] += e.weight;
    incident_[e.y] += e.weight;
    total_ += e.weight;
  }
}

std::uint64_t RawCoNetwork::weight(WordId x, WordId y) const {
  if (x > y) std::swap(x, y);
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair{x, y},
      [](const PairCount& e, const std::pair<WordId, WordId>& key) {
        return e.x != key.first ? e.x < key.first : e.y < key.second;
      });
  if (it == edges_.end() || it->x != x || it->y != y) return 0;
  return it->weight;
}

std::size_t RawCoNetwork::num_connected_words() const {
  return static_cast<std::size_t>(
      std::count_if(incident_.begin(), incident_.end(),
                    [](std::uint64_t m) { return m > 0; }));
}

RawCoNetwork RawCoNetwork::merged(const RawCoNetwork& other) const {
  if (other.num_words() != num_words()) {
    throw FormatError("cannot merge networks over different vocabularies");
  }
  std::vector<PairCount> out;
  out.reserve(edges_.size() + other.edges_.size());
  auto a = edges_.begin();
  auto b = other.edges_.begin();
  while (a != edges_.end() || b != other.edges_.end()) {
    if (b == other.edges_.end() ||
        (a != edges_.end() && (a->x != b->x ? a->x < b->x : a->y < b->y))) {
      out.push_back(*a++);
    } else if (a == edges_.end() || a->x != b->x || a->y != b->y) {
      out.push_back(*b++);
    } else {
      out.push_back({a->x, a->y, a->weight + b->weight});
      ++a;
      ++b;
    }
  }
  return RawCoNetwork(num_words(), std::max(window_size_, other.window_size_),
                      std::move(out));
}

namespace {

using PairMap = std::unordered_map<std::uint64_t, std::uint64_t>;

std::uint64_t pair_key(WordId a, WordId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Position pair (i, j), i < j, lies in every window starting in
// [max(0, j-L+1), min(i, n-L)].
void accumulate_doc(std::span<const WordId> tokens, std::size_t window,
                    WindowMode mode, PairMap& counts) {
  const std::size_t n = tokens.size();
  if (n < 2) return;
  const bool single = mode == WindowMode::document || n <= window;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j_end = single ? n : std::min(n, i + window);
    for (std::size_t j = i + 1; j < j_end; ++j) {
      if (tokens[i] == tokens[j]) continue;
      std::uint64_t times = 1;
      if (!single) {
        const std::size_t lo = j + 1 >= window ? j + 1 - window : 0;
        const std::size_t hi = std::min(i, n - window);
        times = hi - lo + 1;
      }
      counts[pair_key(tokens[i], tokens[j])] += times;
    }
  }
}

RawCoNetwork to_network(const PairMap& counts, std::size_t num_words,
                        std::size_t window) {
  std::vector<PairCount> edges;
  edges.reserve(counts.size());
  for (const auto& [key, w] : counts) {
    edges.push_back({static_cast<WordId>(key >> 32),
                     static_cast<WordId>(key & 0xffffffffULL), w});
  }
  return RawCoNetwork(num_words, window, std::move(edges));
}

}  // namespace

RawCoNetwork accumulate_pair_counts(const LabeledCorpus& corpus,
                                    std::size_t window_size, WindowMode mode,
                                    unsigned threads) {
  if (window_size < 2) throw InvalidConfig("window size must be >= 2");
  const std::size_t V = corpus.vocab.size();
  threads = std::max(1U, std::min<unsigned>(
                             threads, static_cast<unsigned>(corpus.size())));
  if (threads <= 1) {
    PairMap counts;
    for (const auto& doc : corpus.docs) {
      accumulate_doc(doc.tokens, window_size, mode, counts);
    }
    return to_network(counts, V, window_size);
  }

  std::vector<RawCoNetwork> partial(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (corpus.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      PairMap counts;
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(corpus.size(), begin + chunk);
      for (std::size_t d = begin; d < end; ++d) {
        accumulate_doc(corpus.docs[d].tokens, window_size, mode, counts);
      }
      partial[t] = to_network(counts, V, window_size);
    });
  }
  for (auto& w : workers) w.join();
  RawCoNetwork net = std::move(partial[0]);
  for (unsigned t = 1; t < threads; ++t) net = net.merged(partial[t]);
  return net;
}

double pmi_from_counts(std::uint64_t pair_weight, std::uint64_t incident_x,
                       std::uint64_t incident_y, std::uint64_t total_weight) {
  if (pair_weight == 0) throw UndefinedActivity("no co-occurrence to score");
  // p(x,y) / (p(x) p(y)) = (D/T) / (m_x m_y / 4T^2) = 4 D T / (m_x m_y)
  const double num = 4.0 * static_cast<double>(pair_weight) *
                     static_cast<double>(total_weight);
  const double den =
      static_cast<double>(incident_x) * static_cast<double>(incident_y);
  return std::log(num / den);
}

double pmi_degree(WordId x, WordId y, const RawCoNetwork& net) {
  const auto d = net.weight(x, y);
  if (d == 0) {
    throw UndefinedActivity("no edge between words " + std::to_string(x) +
                            " and " + std::to_string(y));
  }
  return pmi_from_counts(d, net.incident(x), net.incident(y),
                         net.total_weight());
}

PrunedCoNetwork::PrunedCoNetwork(std::size_t num_words,
                                 std::size_t raw_edge_count,
                                 std::uint64_t raw_total_weight,
                                 std::vector<ScoredEdge> edges)
    : num_words_(num_words),
      raw_edge_count_(raw_edge_count),
      raw_total_weight_(raw_total_weight),
      edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (!(e.activity > 0.0)) throw FormatError("pruned edge with activity <= 0");
    if (e.x >= e.y || e.y >= num_words_) throw FormatError("bad pruned edge");
  }
}

double PrunedCoNetwork::activity(WordId x, WordId y) const {
  if (x > y) std::swap(x, y);
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair{x, y},
      [](const ScoredEdge& e, const std::pair<WordId, WordId>& key) {
        return e.x != key.first ? e.x < key.first : e.y < key.second;
      });
  if (it == edges_.end() || it->x != x || it->y != y) return 0.0;
  return it->activity;
}

std::size_t PrunedCoNetwork::num_connected_words() const {
  std::vector<char> seen(num_words_, 0);
  for (const auto& e : edges_) seen[e.x] = seen[e.y] = 1;
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
}

PrunedCoNetwork prune(const RawCoNetwork& net) {
  std::vector<ScoredEdge> kept;
  for (const auto& e : net.edges()) {
    const double a = pmi_from_counts(e.weight, net.incident(e.x),
                                     net.incident(e.y), net.total_weight());
    if (a > 0.0) kept.push_back({e.x, e.y, e.weight, a});
  }
  return PrunedCoNetwork(net.num_words(), net.num_edges(), net.total_weight(),
                         std::move(kept));
}

namespace {

void write_edge(std::ostream& out, const Vocabulary& vocab, WordId x, WordId y,
                std::uint64_t weight, double activity) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", activity);
  out << vocab.word(x) << '\t' << vocab.word(y) << '\t' << weight << '\t'
      << buf << '\n';
}

}  // namespace

void write_network(std::ostream& out, const RawCoNetwork& net,
                   const Vocabulary& vocab) {
  for (const auto& e : net.edges()) {
    write_edge(out, vocab, e.x, e.y, e.weight, pmi_degree(e.x, e.y, net));
  }
}

void write_network(std::ostream& out, const PrunedCoNetwork& net,
                   const Vocabulary& vocab) {
  for (const auto& e : net.edges()) {
    write_edge(out, vocab, e.x, e.y, e.weight, e.activity);
  }
}

}  // namespace cwibtd
