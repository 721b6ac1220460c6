#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "srl/buffer.hpp"
#include "srl/error.hpp"

using namespace srl;

namespace {

Solution make(double fitness) { return Solution{{}, fitness, 1, 0}; }

}  // namespace

TEST_CASE("first insert sets a degenerate range in bucket 0") {
  LruBuffer buf(100, 100, 20.0);
  CHECK(buf.insert(make(0.4)) == 0);
  CHECK(buf.range_min() == 0.4);
  CHECK(buf.range_max() == 0.4);
  CHECK(buf.bucket(0).size() == 1);
  CHECK(buf.bucket_index(0.4) == 0);
  CHECK(buf.insert(make(0.4)) == 1);
  CHECK(buf.bucket(0).size() == 2);
}

TEST_CASE("bucket index maps the range onto m buckets") {
  LruBuffer buf(100, 100, 20.0);
  buf.insert(make(0.0));
  buf.insert(make(1.0));
  CHECK(buf.bucket_index(0.0) == 0);
  CHECK(buf.bucket_index(0.5) == 50);
  CHECK(buf.bucket_index(0.999) == 99);
  CHECK(buf.bucket_index(1.0) == 99);
  CHECK(buf.bucket(99).size() == 1);
}

TEST_CASE("range expansion rebuckets stored solutions") {
  LruBuffer buf(100, 100, 20.0);
  buf.insert(make(0.0));
  buf.insert(make(0.999));
  CHECK(buf.bucket(99).size() == 1);
  buf.insert(make(2.0));
  CHECK(buf.bucket(99).size() == 1);
  CHECK(buf.bucket(99).front().fitness == 2.0);
  REQUIRE(buf.bucket(49).size() == 1);
  CHECK(buf.bucket(49).front().fitness == 0.999);
  CHECK(buf.range_min() == 0.0);
  CHECK(buf.range_max() == 2.0);
}

TEST_CASE("bucket weights grow exponentially with the bucket index") {
  LruBuffer buf(100, 100, 20.0);
  for (int i = 0; i <= 99; ++i) buf.insert(make(i / 99.0 + 1e-9));
  buf.insert(make(0.0));
  const auto w = buf.bucket_weights();
  for (std::size_t i = 1; i < w.size(); ++i) {
    REQUIRE(w[i] > 0.0);
    CHECK(w[i] > w[i - 1]);
  }
  CHECK(std::abs(w[99] / w[0] - std::exp(20.0)) / std::exp(20.0) < 1e-9);
  CHECK(w[50] / w[0] == doctest::Approx(24367.61074563484).epsilon(1e-9));
  const auto p = buf.bucket_probabilities();
  double total = 0.0;
  for (double v : p) total += v;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("empty buckets are never sampled") {
  LruBuffer buf(10, 10, 20.0);
  buf.insert(make(0.0));
  buf.insert(make(1.0));
  const auto w = buf.bucket_weights();
  for (std::size_t i = 1; i < 9; ++i) CHECK(w[i] == 0.0);
  Rng rng = make_rng(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double f = buf.sample(rng).fitness;
    CHECK((f == 0.0 || f == 1.0));
  }
}

TEST_CASE("sampling frequencies follow bucket probabilities") {
  LruBuffer buf(4, 10, 2.0);
  for (double f : {0.0, 0.3, 0.3, 0.6, 1.0}) buf.insert(make(f));
  const auto p = buf.bucket_probabilities();
  Rng rng = make_rng(2, 1);
  std::vector<double> counts(4, 0.0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) counts[buf.bucket_index(buf.sample(rng).fitness)] += 1.0;
  for (std::size_t i = 0; i < 4; ++i) CHECK(counts[i] / n == doctest::Approx(p[i]).epsilon(0.05));
}

TEST_CASE("a full bucket evicts its oldest solutions") {
  LruBuffer buf(100, 100, 20.0);
  buf.insert(make(0.0));
  buf.insert(make(1.0));
  for (int i = 0; i < 350; ++i) buf.insert(make(0.5));
  const auto& b = buf.bucket(50);
  REQUIRE(b.size() == 100);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].stamp == 252 + i);
  CHECK(buf.size() == 102);
}

TEST_CASE("rebucket keeps the newest stamps when buckets merge") {
  LruBuffer buf(100, 3, 20.0);
  buf.insert(make(0.0));
  buf.insert(make(1.0));
  for (double f : {0.50, 0.51, 0.505, 0.508}) buf.insert(make(f));
  buf.insert(make(10.0));
  const auto& b = buf.bucket(5);
  REQUIRE(b.size() == 3);
  CHECK(b[0].stamp == 3);
  CHECK(b[1].stamp == 4);
  CHECK(b[2].stamp == 5);
}

TEST_CASE("rebucket is idempotent") {
  Rng rng = make_rng(3, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LruBuffer buf(20, 5, 20.0);
  for (int i = 0; i < 300; ++i) buf.insert(make(u(rng)));
  auto snapshot = [&] {
    std::vector<std::vector<std::uint64_t>> out;
    for (std::size_t i = 0; i < buf.num_buckets(); ++i) {
      out.emplace_back();
      for (const auto& s : buf.bucket(i)) out.back().push_back(s.stamp);
    }
    return out;
  };
  const auto before = snapshot();
  buf.rebucket();
  CHECK(snapshot() == before);
  buf.rebucket();
  CHECK(snapshot() == before);
}

TEST_CASE("greedy sampling returns the linear-scan argmax") {
  Rng rng = make_rng(4, 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 60);
  for (int trial = 0; trial < 1000; ++trial) {
    LruBuffer buf(10, 4, 20.0, SamplingMode::greedy);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      // Coarse fitness values make ties common.
      auto s = make(std::round(u(rng) * 8.0) / 8.0);
      buf.insert(s);
    }
    std::vector<Solution> stored;
    for (std::size_t i = 0; i < buf.num_buckets(); ++i)
      for (const auto& s : buf.bucket(i)) stored.push_back(s);
    const Solution* expected = &stored.front();
    for (const auto& s : stored)
      if (s.fitness > expected->fitness || (s.fitness == expected->fitness && s.stamp > expected->stamp))
        expected = &s;
    const auto got = buf.sample(rng);
    CHECK(got.stamp == expected->stamp);
  }
}

TEST_CASE("buffer contract errors") {
  CHECK_THROWS_AS(LruBuffer(0, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(LruBuffer(1, 0, 1.0), ConfigError);
  LruBuffer buf(10, 10, 20.0);
  Rng rng = make_rng(5, 1);
  CHECK_THROWS_AS(buf.sample(rng), ContractError);
  CHECK_THROWS_AS(buf.best(), ContractError);
  CHECK_THROWS_AS(buf.insert(make(NAN)), ContractError);
  auto zero_life = make(0.5);
  zero_life.lifetime = 0;
  CHECK_THROWS_AS(buf.insert(zero_life), ContractError);
}
