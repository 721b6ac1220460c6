#include <cmath>

#include "doctest.h"
#include "srl/environment.hpp"
#include "srl/error.hpp"

using namespace srl;

TEST_CASE("stationary bandit pays the indicator of the good arm") {
  Bandit bandit;
  Rng rng = make_rng(1, 1);
  const auto start = bandit.reset(rng);
  CHECK(start.obs.empty());
  CHECK(bandit.state().good_arm == 0);
  for (int t = 0; t < 500; ++t) {
    const auto r0 = bandit.step(0, rng);
    CHECK(r0.reward == 1.0);
    CHECK_FALSE(r0.done);
    CHECK(r0.obs.empty());
    CHECK(bandit.step(1, rng).reward == 0.0);
  }
  CHECK_THROWS_AS(bandit.step(2, rng), ContractError);
}

TEST_CASE("swap bandit flips when the countdown reaches zero") {
  Bandit bandit(true);
  Rng rng = make_rng(2, 1);
  bandit.reset(rng);
  bandit.state().good_arm = 0;
  bandit.state().steps_until_swap = 1;
  bandit.step(0, rng);
  CHECK(bandit.state().good_arm == 1);
  CHECK(bandit.state().steps_until_swap >= 50);
  CHECK(bandit.state().steps_until_swap <= 150);
}

TEST_CASE("swap count over T steps lies in the interval bounds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Bandit bandit(true, 50, 150);
    Rng rng = make_rng(seed, 2);
    bandit.reset(rng);
    const int T = 10000;
    int swaps = 0;
    std::size_t arm = bandit.state().good_arm;
    int since = 0, shortest = T, longest = 0;
    for (int t = 0; t < T; ++t) {
      bandit.step(0, rng);
      ++since;
      if (bandit.state().good_arm != arm) {
        if (swaps > 0) {
          shortest = std::min(shortest, since);
          longest = std::max(longest, since);
        }
        ++swaps;
        since = 0;
        arm = bandit.state().good_arm;
      }
    }
    CHECK(swaps >= T / 150 - 1);
    CHECK(swaps <= T / 50 + 1);
    CHECK(shortest >= 50);
    CHECK(longest <= 150);
  }
}

TEST_CASE("swap bandit rejects an empty interval") {
  CHECK_THROWS_AS(Bandit(true, 0, 10), ConfigError);
  CHECK_THROWS_AS(Bandit(true, 20, 10), ConfigError);
}

TEST_CASE("cartpole one step from rest, pushing right") {
  const auto acc = Cartpole::accelerations({}, 10.0);
  CHECK(acc.theta_acc == doctest::Approx(-14.634146341463415).epsilon(1e-12));
  CHECK(acc.x_acc == doctest::Approx(9.75609756097561).epsilon(1e-12));

  Cartpole cart;
  cart.set_state({});
  const auto r = cart.step(1);
  CHECK(cart.state().x == 0.0);
  CHECK(cart.state().theta == 0.0);
  CHECK(cart.state().x_dot == doctest::Approx(0.1951219512195122).epsilon(1e-12));
  CHECK(cart.state().theta_dot == doctest::Approx(-0.2926829268292683).epsilon(1e-12));
  CHECK(r.reward == 1.0);
  CHECK_FALSE(r.done);
  CHECK(r.obs.size() == 4);
}

TEST_CASE("cartpole terminates past the angle limit with zero reward") {
  Cartpole cart;
  CartpoleState s;
  s.theta = 0.21;
  s.theta_dot = 0.5;
  cart.set_state(s);
  const auto r = cart.step(0);
  CHECK(cart.state().theta == doctest::Approx(0.22));
  CHECK(r.done);
  CHECK(r.reward == 0.0);
}

TEST_CASE("cartpole caps episodes at 200 rewarded steps") {
  Cartpole cart;
  Rng rng = make_rng(3, 1);
  auto obs = cart.reset(rng).obs;
  double total = 0.0;
  int steps = 0;
  for (;;) {
    const std::size_t action = obs[2] + 0.5 * obs[3] > 0.0 ? 1 : 0;
    const auto r = cart.step(action, rng);
    total += r.reward;
    ++steps;
    if (r.done) break;
    obs = r.obs;
  }
  CHECK(steps == 200);
  CHECK(total == 200.0);
}

TEST_CASE("cartpole reset draws small states") {
  Cartpole cart;
  Rng rng = make_rng(4, 1);
  for (int i = 0; i < 200; ++i) {
    const auto r = cart.reset(rng);
    for (double v : r.obs) CHECK(std::abs(v) <= 0.05);
    CHECK(cart.state().step_count == 0);
  }
}

TEST_CASE("unforced pole falls away from upright") {
  Cartpole cart;
  CartpoleState s;
  s.theta = 0.01;
  cart.set_state(s);
  double prev = std::abs(s.theta);
  for (int i = 0; i < 20; ++i) {
    const auto acc = Cartpole::accelerations(cart.state(), 0.0);
    CHECK(acc.theta_acc > 0.0);
    auto next = cart.state();
    next.x += Cartpole::kTau * next.x_dot;
    next.x_dot += Cartpole::kTau * acc.x_acc;
    next.theta += Cartpole::kTau * next.theta_dot;
    next.theta_dot += Cartpole::kTau * acc.theta_acc;
    cart.set_state(next);
    CHECK(std::abs(next.theta) >= prev);
    prev = std::abs(next.theta);
  }
  CHECK(prev > 0.01);
}

TEST_CASE("environments are deterministic given the draw sequence") {
  for (const char* name : {"bandit", "bandit-swap", "cartpole"}) {
    auto a = make_environment(name);
    auto b = make_environment(name);
    Rng ra = make_rng(5, 1), rb = make_rng(5, 1);
    Rng actions = make_rng(6, 1);
    auto sa = a->reset(ra);
    auto sb = b->reset(rb);
    CHECK(sa.obs == sb.obs);
    for (int t = 0; t < 300; ++t) {
      const std::size_t act = actions() % 2;
      auto x = a->step(act, ra);
      auto y = b->step(act, rb);
      CHECK(x.obs == y.obs);
      CHECK(x.reward == y.reward);
      CHECK(x.done == y.done);
      if (x.done) {
        a->reset(ra);
        b->reset(rb);
      }
    }
  }
}

TEST_CASE("environment registry") {
  CHECK(make_environment("bandit")->obs_dim() == 0);
  CHECK(make_environment("cartpole")->obs_dim() == 4);
  CHECK(make_environment("bandit-swap")->action_count() == 2);
  CHECK(is_known_environment("cartpole"));
  CHECK_FALSE(is_known_environment("mountaincar"));
  CHECK_THROWS_AS(make_environment("mountaincar"), ConfigError);
}
