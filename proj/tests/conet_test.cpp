#include <cmath>
#include <random>
#include <sstream>

#include "cwibtd/conet.hpp"
#include "cwibtd/error.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cwibtd;
using cwibtd::testing::naive_pair_counts;
using cwibtd::testing::random_corpus;

namespace {

LabeledCorpus corpus_of(const std::vector<TokenList>& docs) {
  return encode_corpus(docs, std::nullopt, build_vocabulary(docs, 1, {}));
}

WordId id(const LabeledCorpus& c, const std::string& w) { return *c.vocab.find(w); }

}  // namespace

TEST_CASE("enumerate_windows") {
  auto spans = enumerate_windows(12, 10);
  CHECK(spans == std::vector<Span>{{0, 10}, {1, 11}, {2, 12}});
  CHECK(enumerate_windows(7, 10) == std::vector<Span>{{0, 7}});
  CHECK(enumerate_windows(10, 10) == std::vector<Span>{{0, 10}});
  CHECK(enumerate_windows(1, 10).empty());
  CHECK(enumerate_windows(0, 10).empty());
  CHECK_THROWS_AS(enumerate_windows(5, 1), InvalidConfig);
}

TEST_CASE("a two-word document is one pair") {
  auto c = corpus_of({{"a", "b"}});
  auto net = accumulate_pair_counts(c, 10);
  CHECK(net.weight(id(c, "a"), id(c, "b")) == 1);
  CHECK(net.total_weight() == 1);
  CHECK(net.num_edges() == 1);
}

TEST_CASE("overlapping windows weight near pairs more than far pairs") {
  // Two windows of four over five words: W2,W3 share both, W0,W1 only the first.
  auto c = corpus_of({{"w0", "w1", "w2", "w3", "w4"}});
  auto net = accumulate_pair_counts(c, 4);
  CHECK(net.weight(id(c, "w2"), id(c, "w3")) == 2);
  CHECK(net.weight(id(c, "w0"), id(c, "w1")) == 1);
  CHECK(net.weight(id(c, "w3"), id(c, "w4")) == 1);
  CHECK(net.weight(id(c, "w0"), id(c, "w4")) == 0);

  auto doc_mode = accumulate_pair_counts(c, 4, WindowMode::document);
  CHECK(doc_mode.weight(id(c, "w0"), id(c, "w4")) == 1);
  CHECK(doc_mode.weight(id(c, "w2"), id(c, "w3")) == 1);
}

TEST_CASE("identical words in one window are not a pair") {
  auto c = corpus_of({{"a", "a", "b"}});
  auto net = accumulate_pair_counts(c, 10);
  CHECK(net.num_edges() == 1);
  CHECK(net.weight(id(c, "a"), id(c, "b")) == 2);
  CHECK(net.weight(id(c, "a"), id(c, "a")) == 0);
}

TEST_CASE("pair counts match the materialized-window oracle") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto c = random_corpus(gen, 1 + gen() % 20, 20, 2 + gen() % 12);
    for (std::size_t L : {2, 3, 5, 10}) {
      for (auto mode : {WindowMode::sliding, WindowMode::document}) {
        auto net = accumulate_pair_counts(c, L, mode);
        auto expected = naive_pair_counts(c, L, mode == WindowMode::document);
        REQUIRE(net.num_edges() == expected.size());
        for (const auto& e : net.edges()) {
          CHECK(e.weight == expected.at({e.x, e.y}));
        }
      }
    }
  }
}

TEST_CASE("network symmetry and mass conservation") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_corpus(gen, 30, 25, 15);
    auto net = accumulate_pair_counts(c, 5);
    std::uint64_t incident_sum = 0;
    for (WordId x = 0; x < net.num_words(); ++x) {
      incident_sum += net.incident(x);
      std::uint64_t row = 0;
      for (WordId y = 0; y < net.num_words(); ++y) {
        CHECK(net.weight(x, y) == net.weight(y, x));
        row += net.weight(x, y);
      }
      CHECK(row == net.incident(x));
      CHECK(net.weight(x, x) == 0);
    }
    CHECK(incident_sum == 2 * net.total_weight());
  }
}

TEST_CASE("parallel accumulation equals sequential, merge commutes") {
  std::mt19937_64 gen(17);
  auto c = random_corpus(gen, 50, 30, 25);
  auto seq = accumulate_pair_counts(c, 6);
  CHECK(accumulate_pair_counts(c, 6, WindowMode::sliding, 4) == seq);

  LabeledCorpus first = c;
  LabeledCorpus second = c;
  first.docs.resize(20);
  second.docs.erase(second.docs.begin(), second.docs.begin() + 20);
  auto a = accumulate_pair_counts(first, 6);
  auto b = accumulate_pair_counts(second, 6);
  CHECK(a.merged(b) == seq);
  CHECK(b.merged(a) == seq);
}

TEST_CASE("pmi_degree uses the pair-distribution estimators") {
  // m(x) = m(y) = 20, T = 100, D(x,y) = 10.
  RawCoNetwork net(4, 10, {{0, 1, 10}, {0, 2, 10}, {1, 3, 10}, {2, 3, 70}});
  REQUIRE(net.total_weight() == 100);
  REQUIRE(net.incident(0) == 20);
  REQUIRE(net.incident(1) == 20);
  CHECK(pmi_degree(0, 1, net) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(pmi_degree(1, 0, net) == pmi_degree(0, 1, net));
  CHECK(pmi_from_counts(10, 20, 20, 100) == doctest::Approx(2.302585093));

  CHECK_THROWS_AS(pmi_degree(0, 3, net), UndefinedActivity);
  CHECK_THROWS_AS(pmi_from_counts(0, 1, 1, 1), UndefinedActivity);
}

TEST_CASE("independent co-occurrence scores exactly zero and is pruned") {
  // x-y once, x-a six times, y-a seven times: T = 14, m(x) = 7, m(y) = 8,
  // so p(x,y) = 1/14 = (7/28)(8/28) = p(x) p(y).
  std::vector<TokenList> docs = {{"x", "y"}};
  for (int i = 0; i < 6; ++i) docs.push_back({"x", "a"});
  for (int i = 0; i < 7; ++i) docs.push_back({"y", "a"});
  auto c = corpus_of(docs);
  auto net = accumulate_pair_counts(c, 10);
  const auto x = id(c, "x");
  const auto y = id(c, "y");
  const auto a = id(c, "a");
  CHECK(pmi_degree(x, y, net) == 0.0);
  auto pruned = prune(net);
  CHECK(pruned.activity(x, y) == 0.0);
  CHECK(pruned.num_edges() == 2);
  CHECK(pruned.activity(x, a) > 0.0);
  CHECK(pruned.activity(a, y) > 0.0);
}

TEST_CASE("a pair rarer than chance scores negative") {
  // b co-occurs mostly with c; the single a-b pair is below expectation.
  RawCoNetwork net(4, 10, {{0, 1, 1}, {0, 3, 50}, {1, 2, 50}, {2, 3, 1}});
  CHECK(pmi_degree(0, 1, net) < 0.0);
  auto pruned = prune(net);
  CHECK(pruned.activity(0, 1) == 0.0);
  CHECK(pruned.activity(0, 3) > 0.0);
}

TEST_CASE("pruning keeps exactly the positive edges") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = random_corpus(gen, 40, 20, 20);
    auto net = accumulate_pair_counts(c, 5);
    auto pruned = prune(net);
    CHECK(pruned.num_edges() <= net.num_edges());
    CHECK(pruned.raw_edge_count() == net.num_edges());
    std::size_t positive = 0;
    for (const auto& e : net.edges()) {
      const double a = pmi_degree(e.x, e.y, net);
      if (a > 0.0) {
        ++positive;
        CHECK(pruned.activity(e.x, e.y) == a);
      } else {
        CHECK(pruned.activity(e.x, e.y) == 0.0);
      }
    }
    CHECK(pruned.num_edges() == positive);
    for (const auto& e : pruned.edges()) {
      CHECK(e.activity > 0.0);
      CHECK(e.weight == net.weight(e.x, e.y));
      // Re-scoring a surviving edge gives the stored value.
      CHECK(pmi_degree(e.x, e.y, net) == e.activity);
    }
    // Σ_y D(x,y) = m(x) forces at least one edge of every word above chance.
    CHECK(pruned.num_connected_words() == net.num_connected_words());
  }
}

TEST_CASE("cross-community edges are pruned") {
  std::mt19937_64 gen(8);
  std::vector<TokenList> docs;
  for (int d = 0; d < 60; ++d) {
    const char side = d % 2 ? 'a' : 'b';
    TokenList doc;
    for (int i = 0; i < 6; ++i) doc.push_back(std::string(1, side) + std::to_string(gen() % 5));
    docs.push_back(doc);
  }
  docs.push_back({"a0", "b0"});
  docs.push_back({"a1", "b3"});
  auto c = corpus_of(docs);
  auto net = accumulate_pair_counts(c, 10);

  auto oracle = naive_pair_counts(c, 10, false);
  std::uint64_t T = 0;
  std::vector<std::uint64_t> m(c.vocab.size(), 0);
  for (const auto& [k, w] : oracle) {
    T += w;
    m[k.first] += w;
    m[k.second] += w;
  }
  std::size_t cross = 0;
  for (const auto& [k, w] : oracle) {
    const bool is_cross = c.vocab.word(k.first)[0] != c.vocab.word(k.second)[0];
    if (!is_cross) continue;
    ++cross;
    // Brute-force PMI from the naive counts.
    const double ratio = (static_cast<double>(w) / T) /
                         ((m[k.first] / (2.0 * T)) * (m[k.second] / (2.0 * T)));
    CHECK(std::log(ratio) < 0.0);
  }
  REQUIRE(cross == 2);
  const auto pruned = prune(net);
  for (const auto& e : pruned.edges()) {
    CHECK(c.vocab.word(e.x)[0] == c.vocab.word(e.y)[0]);
  }
}

TEST_CASE("pmi decreases strictly as a word's incident weight grows") {
  for (std::uint64_t d : {1, 5, 20}) {
    for (std::uint64_t total : {100, 1000}) {
      for (std::uint64_t my : {d, 2 * d + 3, std::uint64_t{50}}) {
        double prev = pmi_from_counts(d, d, my, total);
        for (std::uint64_t mx = d + 1; mx <= 200; ++mx) {
          const double cur = pmi_from_counts(d, mx, my, total);
          CHECK(cur < prev);
          prev = cur;
        }
      }
    }
  }
}

TEST_CASE("network dump is sorted by id") {
  auto c = corpus_of({{"b", "a", "c"}});
  auto net = accumulate_pair_counts(c, 10);
  std::ostringstream out;
  write_network(out, net, c.vocab);
  // ids: b=0, a=1, c=2; T=3, every m=2: activity ln(4*1*3/4) = ln 3.
  CHECK(out.str() ==
        "b\ta\t1\t1.098612289\n"
        "b\tc\t1\t1.098612289\n"
        "a\tc\t1\t1.098612289\n");
}

TEST_CASE("malformed edge lists are rejected") {
  CHECK_THROWS_AS(RawCoNetwork(3, 10, {{1, 0, 1}}), FormatError);
  CHECK_THROWS_AS(RawCoNetwork(3, 10, {{0, 1, 1}, {0, 1, 2}}), FormatError);
  CHECK_THROWS_AS(RawCoNetwork(2, 10, {{0, 5, 1}}), FormatError);
  CHECK_THROWS_AS(RawCoNetwork(2, 10, {{0, 1, 0}}), FormatError);
}
