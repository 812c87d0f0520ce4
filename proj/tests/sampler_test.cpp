#include <algorithm>
#include <numeric>
#include <random>

#include "cwibtd/error.hpp"
#include "cwibtd/sampler.hpp"
#include "doctest.h"

using namespace cwibtd;

namespace {

TokenDocs random_docs(std::uint64_t seed, std::size_t n_docs, std::size_t V) {
  std::mt19937_64 gen(seed);
  TokenDocs docs(n_docs);
  for (auto& d : docs) {
    d.resize(1 + gen() % 12);
    for (auto& w : d) w = static_cast<WordId>(gen() % V);
  }
  return docs;
}

}  // namespace

TEST_CASE("config validation") {
  SamplerConfig ok;
  CHECK_NOTHROW(ok.validate());
  for (auto bad : {SamplerConfig{0, 0.1, 0.1, 10, 1}, SamplerConfig{2, 0.0, 0.1, 10, 1},
                   SamplerConfig{2, 0.1, -1.0, 10, 1}, SamplerConfig{2, 0.1, 0.1, 0, 1}}) {
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  }
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(42);
  Rng b(42);
  Rng c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
    differs |= c.uniform() != u;
    CHECK(a.below(7) < 7);
    b.below(7);
  }
  CHECK(differs);
}

TEST_CASE("init_state assigns every token and keeps counts consistent") {
  SamplerConfig cfg{2, 0.1, 0.1, 1, 5};
  auto s = init_state({{0, 1, 2, 1}}, 3, cfg);
  CHECK(s.doc_topic(0, 0) + s.doc_topic(0, 1) == 4);
  CHECK(s.total_tokens == 4);
  CHECK_NOTHROW(verify_invariants(s));

  auto docs = random_docs(1, 40, 30);
  cfg.topics = 6;
  auto x = init_state(docs, 30, cfg);
  auto y = init_state(docs, 30, cfg);
  CHECK(x.z == y.z);
  CHECK_NOTHROW(verify_invariants(x));

  CHECK_THROWS_AS(init_state({}, 3, cfg), EmptyInput);
  CHECK_THROWS_AS(init_state({{}, {}}, 3, cfg), EmptyInput);
}

TEST_CASE("a single topic leaves assignments unchanged") {
  SamplerConfig cfg{1, 0.1, 0.1, 1, 3};
  auto s = init_state(random_docs(2, 10, 8), 8, cfg);
  const auto before = s.z;
  gibbs_sweep(s, cfg);
  CHECK(s.z == before);
  CHECK_NOTHROW(verify_invariants(s));
}

TEST_CASE("a lone token with its counts removed has a uniform conditional") {
  SamplerConfig cfg{2, 0.1, 0.1, 1, 9};
  auto s = init_state({{0}}, 1, cfg);
  const TopicId k = s.z[0][0];
  --s.doc_topic(0, k);
  --s.word_topic(0, k);
  --s.topic_total[k];
  auto w = conditional_weights(s, 0, 0, cfg);
  REQUIRE(w.size() == 2);
  // (0 + α)(0 + β)/(0 + Vβ) for both topics.
  CHECK(w[0] == w[1]);
  CHECK(w[0] / (w[0] + w[1]) == 0.5);
  CHECK(w[0] == doctest::Approx(0.1 * 0.1 / 0.1));
}

TEST_CASE("count invariants hold after every sweep") {
  SamplerConfig cfg{5, 0.1, 0.01, 100, 77};
  auto s = init_state(random_docs(4, 20, 25), 25, cfg);
  for (int it = 0; it < 100; ++it) {
    gibbs_sweep(s, cfg);
    REQUIRE_NOTHROW(verify_invariants(s));
  }
}

TEST_CASE("verify_invariants catches corrupted counts") {
  SamplerConfig cfg{3, 0.1, 0.1, 1, 1};
  auto s = init_state(random_docs(5, 5, 6), 6, cfg);
  auto broken = s;
  ++broken.doc_topic(0, 0);
  CHECK_THROWS_AS(verify_invariants(broken), NumericalError);
  broken = s;
  ++broken.topic_total[1];
  CHECK_THROWS_AS(verify_invariants(broken), NumericalError);
  broken = s;
  broken.word_topic(0, 0) -= 1000;
  CHECK_THROWS_AS(verify_invariants(broken), NumericalError);
}

TEST_CASE("a sweep over corrupted counts raises NumericalError") {
  SamplerConfig cfg{2, 0.1, 0.1, 1, 1};
  auto s = init_state({{0, 1}}, 2, cfg);
  for (std::size_t k = 0; k < 2; ++k) s.doc_topic(0, k) -= 100;
  CHECK_THROWS_AS(gibbs_sweep(s, cfg), NumericalError);
}

TEST_CASE("phi and theta are smoothed probability rows") {
  SamplerConfig cfg{4, 0.05, 0.01, 20, 3};
  auto r = train(random_docs(6, 30, 40), 40, cfg);
  REQUIRE(r.phi.rows() == 4);
  REQUIRE(r.phi.cols() == 40);
  REQUIRE(r.theta.rows() == 30);
  for (std::size_t k = 0; k < r.phi.rows(); ++k) {
    auto row = r.phi.row(k);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*std::min_element(row.begin(), row.end()) > 0.0);
  }
  for (std::size_t d = 0; d < r.theta.rows(); ++d) {
    auto row = r.theta.row(d);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*std::min_element(row.begin(), row.end()) > 0.0);
  }
}

TEST_CASE("training is reproducible for a fixed seed") {
  SamplerConfig cfg{3, 0.1, 0.1, 30, 1234};
  auto docs = random_docs(7, 25, 20);
  auto a = train(docs, 20, cfg);
  auto b = train(docs, 20, cfg);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  cfg.seed = 1235;
  auto c = train(docs, 20, cfg);
  CHECK_FALSE(c.state.z == a.state.z);
}

TEST_CASE("two disjoint vocabularies separate into two topics") {
  // Words 0..49 belong to side A, 50..99 to side B.
  std::mt19937_64 gen(12);
  TokenDocs docs;
  for (int d = 0; d < 200; ++d) {
    std::vector<WordId> doc(10);
    const WordId base = d % 2 ? 50 : 0;
    for (auto& w : doc) w = base + static_cast<WordId>(gen() % 50);
    docs.push_back(doc);
  }
  SamplerConfig cfg{2, 0.1, 0.1, 200, 5};
  auto r = train(docs, 100, cfg);
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<WordId> order(100);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](WordId a, WordId b) { return r.phi(k, a) > r.phi(k, b); });
    const bool side = order[0] >= 50;
    for (int i = 0; i < 10; ++i) CHECK((order[static_cast<std::size_t>(i)] >= 50) == side);
  }
}

TEST_CASE("the observer sees every sweep") {
  SamplerConfig cfg{2, 0.1, 0.1, 7, 1};
  std::vector<std::size_t> seen;
  train(random_docs(8, 5, 5), 5, cfg,
        [&](std::size_t it, const TopicModelState&) { seen.push_back(it); });
  CHECK(seen == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7});
}
