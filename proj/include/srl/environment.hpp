#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "srl/rng.hpp"

namespace srl {

struct StepResult {
  std::vector<double> obs;
  double reward = 0.0;
  bool done = false;
};

// Episodic environment contract shared by the bandits and Cartpole. All
// randomness is drawn from the stream passed in, so an instance is
// deterministic given its call sequence.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t obs_dim() const = 0;
  virtual std::size_t action_count() const = 0;

  virtual StepResult reset(Rng& rng) = 0;
  virtual StepResult step(std::size_t action, Rng& rng) = 0;
};

struct BanditState {
  std::size_t good_arm = 0;
  bool swap_enabled = false;
  int steps_until_swap = 1;
  int swap_low = 50;
  int swap_high = 150;
};

// Two-armed bandit paying 1 for the good arm and 0 otherwise. With swapping
// enabled the arms exchange roles after a countdown drawn uniformly from
// [swap_low, swap_high]. Never terminates.
class Bandit final : public Environment {
 public:
  explicit Bandit(bool swap_enabled = false, int swap_low = 50, int swap_high = 150);

  std::size_t obs_dim() const override { return 0; }
  std::size_t action_count() const override { return 2; }

  StepResult reset(Rng& rng) override;
  StepResult step(std::size_t action, Rng& rng) override;

  const BanditState& state() const { return state_; }
  BanditState& state() { return state_; }

 private:
  int draw_interval(Rng& rng) const;

  BanditState state_;
};

struct CartpoleState {
  double x = 0.0;          // m
  double x_dot = 0.0;      // m/s
  double theta = 0.0;      // rad, 0 = upright
  double theta_dot = 0.0;  // rad/s
  int step_count = 0;
};

// Classic cart-pole balancing with explicit Euler integration. Action 0
// pushes left, action 1 pushes right. Reward 1 per step except on the step
// that drops the pole or leaves the track; episodes are capped at 200 steps.
class Cartpole final : public Environment {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kCartMass = 1.0;
  static constexpr double kPoleMass = 0.1;
  static constexpr double kTotalMass = kCartMass + kPoleMass;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kForce = 10.0;
  static constexpr double kTau = 0.02;
  static constexpr double kXLimit = 2.4;
  static constexpr double kThetaLimit = 0.2095;
  static constexpr int kMaxSteps = 200;

  struct Derivatives {
    double x_acc;
    double theta_acc;
  };

  std::size_t obs_dim() const override { return 4; }
  std::size_t action_count() const override { return 2; }

  StepResult reset(Rng& rng) override;
  StepResult step(std::size_t action, Rng& rng) override;
  StepResult step(std::size_t action);

  static Derivatives accelerations(const CartpoleState& s, double force);

  const CartpoleState& state() const { return state_; }
  void set_state(const CartpoleState& s) { state_ = s; }

 private:
  std::vector<double> observe() const;

  CartpoleState state_;
};

struct EnvOptions {
  int swap_low = 50;
  int swap_high = 150;
};

// Names: "bandit", "bandit-swap", "cartpole". Throws ConfigError otherwise.
std::unique_ptr<Environment> make_environment(std::string_view name, const EnvOptions& options = {});
bool is_known_environment(std::string_view name);

}  // namespace srl
