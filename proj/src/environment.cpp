#include "srl/environment.hpp"

#include <cmath>

#include "srl/error.hpp"

namespace srl {

Bandit::Bandit(bool swap_enabled, int swap_low, int swap_high) {
  if (swap_enabled && (swap_low < 1 || swap_high < swap_low))
    throw ConfigError("swap interval must satisfy 1 <= low <= high");
  state_.swap_enabled = swap_enabled;
  state_.swap_low = swap_low;
  state_.swap_high = swap_high;
  state_.steps_until_swap = swap_low;
}

int Bandit::draw_interval(Rng& rng) const {
  std::uniform_int_distribution<int> interval(state_.swap_low, state_.swap_high);
  return interval(rng);
}

StepResult Bandit::reset(Rng& rng) {
  if (state_.swap_enabled) {
    std::uniform_int_distribution<int> coin(0, 1);
    state_.good_arm = static_cast<std::size_t>(coin(rng));
    state_.steps_until_swap = draw_interval(rng);
  } else {
    state_.good_arm = 0;
  }
  return {};
}

StepResult Bandit::step(std::size_t action, Rng& rng) {
  if (action >= 2) throw ContractError("bandit action must be 0 or 1");
  StepResult result;
  result.reward = action == state_.good_arm ? 1.0 : 0.0;
  if (state_.swap_enabled && --state_.steps_until_swap <= 0) {
    state_.good_arm = 1 - state_.good_arm;
    state_.steps_until_swap = draw_interval(rng);
  }
  return result;
}

Cartpole::Derivatives Cartpole::accelerations(const CartpoleState& s, double force) {
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);
  const double temp =
      (force + kPoleMass * kHalfLength * s.theta_dot * s.theta_dot * sin_t) / kTotalMass;
  const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                           (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / kTotalMass));
  const double x_acc = temp - kPoleMass * kHalfLength * theta_acc * cos_t / kTotalMass;
  return {x_acc, theta_acc};
}

std::vector<double> Cartpole::observe() const {
  return {state_.x, state_.x_dot, state_.theta, state_.theta_dot};
}

StepResult Cartpole::reset(Rng& rng) {
  std::uniform_real_distribution<double> init(-0.05, 0.05);
  state_.x = init(rng);
  state_.x_dot = init(rng);
  state_.theta = init(rng);
  state_.theta_dot = init(rng);
  state_.step_count = 0;
  return {observe(), 0.0, false};
}

StepResult Cartpole::step(std::size_t action, Rng&) { return step(action); }

StepResult Cartpole::step(std::size_t action) {
  if (action >= 2) throw ContractError("cartpole action must be 0 (left) or 1 (right)");
  const double force = action == 1 ? kForce : -kForce;
  const auto acc = accelerations(state_, force);

  state_.x += kTau * state_.x_dot;
  state_.x_dot += kTau * acc.x_acc;
  state_.theta += kTau * state_.theta_dot;
  state_.theta_dot += kTau * acc.theta_acc;
  ++state_.step_count;

  const bool failed = std::abs(state_.x) > kXLimit || std::abs(state_.theta) > kThetaLimit;
  StepResult result;
  result.obs = observe();
  result.reward = failed ? 0.0 : 1.0;
  result.done = failed || state_.step_count >= kMaxSteps;
  return result;
}

bool is_known_environment(std::string_view name) {
  return name == "bandit" || name == "bandit-swap" || name == "cartpole";
}

std::unique_ptr<Environment> make_environment(std::string_view name, const EnvOptions& options) {
  if (name == "bandit") return std::make_unique<Bandit>(false);
  if (name == "bandit-swap")
    return std::make_unique<Bandit>(true, options.swap_low, options.swap_high);
  if (name == "cartpole") return std::make_unique<Cartpole>();
  throw ConfigError("unknown environment '" + std::string(name) +
                    "' (expected bandit, bandit-swap or cartpole)");
}

}  // namespace srl
