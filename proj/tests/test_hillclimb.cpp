#include <cmath>

#include "doctest.h"
#include "srl/error.hpp"
#include "srl/experiment.hpp"
#include "srl/hillclimb.hpp"

using namespace srl;

TEST_CASE("perturb adds zero-mean noise with the requested spread") {
  Rng rng = make_rng(1, 1);
  const auto base = init_params(make_dims(8, 64, 3, 2), rng);
  for (double sigma : {0.01, 0.3}) {
    const auto noisy = perturb(base, sigma, rng);
    double sum = 0.0, sq = 0.0, n = 0.0;
    for (std::size_t l = 0; l < base.layers.size(); ++l)
      for (std::size_t i = 0; i < base.layers[l].w.size(); ++i) {
        const double d = noisy.layers[l].w[i] - base.layers[l].w[i];
        sum += d;
        sq += d * d;
        n += 1.0;
      }
    CHECK(n > 10000);
    CHECK(std::sqrt(sq / n) == doctest::Approx(sigma).epsilon(0.02));
    CHECK(std::abs(sum / n) < 4.0 * sigma / std::sqrt(n));
  }
  CHECK(perturb(base, 0.0, rng) == base);
  CHECK_THROWS_AS(perturb(base, -1.0, rng), ContractError);
  CHECK_THROWS_AS(perturb(base, NAN, rng), ContractError);
}

TEST_CASE("hill climbing never self-modifies and is deterministic") {
  ExperimentConfig c;
  c.iterations = 30;
  c.steps_per_execution = 100;
  c.hidden_width = 8;
  c.mode = SearchMode::hillclimb;
  const auto f = fme_config(c, 0);
  const auto a = hillclimb_run(f, 0.1, env_factory(c));
  const auto b = hillclimb_run(f, 0.1, env_factory(c));
  CHECK(a.history == b.history);
  CHECK(a.history.rows.size() == 30);

  // With zero noise every child is a clone of the root, and the bandit
  // policy on a constant input is stationary.
  const auto frozen = hillclimb_run(f, 0.0, env_factory(c));
  CHECK(frozen.best.params == frozen.bootstrap.params);
}

TEST_CASE("variance sweep reports the best mean and keeps the earlier sigma on ties") {
  ExperimentConfig c;
  c.iterations = 20;
  c.steps_per_execution = 100;
  c.hidden_width = 8;
  const auto f = fme_config(c, 0);
  const std::vector<std::uint64_t> seeds = {0, 1};
  const auto sweep = variance_sweep({0.0, 0.0, 0.3}, f, env_factory(c), seeds);
  REQUIRE(sweep.rows.size() == 3);
  CHECK(sweep.rows[0].mean_final_best == sweep.rows[1].mean_final_best);
  double top = 0.0;
  for (const auto& r : sweep.rows) top = std::max(top, r.mean_final_best);
  CHECK(sweep.rows[sweep.best_index].mean_final_best == top);
  CHECK(sweep.best_index != 1);

  const auto tie = variance_sweep({0.0, 0.0}, f, env_factory(c), seeds);
  CHECK(tie.best_index == 0);
  CHECK_THROWS_AS(variance_sweep({}, f, env_factory(c), seeds), ConfigError);
}
