#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "srl/buffer.hpp"
#include "srl/environment.hpp"
#include "srl/network.hpp"
#include "srl/rng.hpp"

namespace srl {

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

struct FmeConfig {
  std::size_t steps_per_execution = 1000;  // L
  std::size_t iterations = 200;
  std::size_t num_buckets = 100;           // m
  std::size_t bucket_capacity = 100;       // c
  double exp_coeff = 20.0;
  SamplingMode mode = SamplingMode::exponential;
  std::uint64_t seed = 0;
  std::vector<LayerDims> dims;
  InputSpec input;
  std::size_t workers = 1;  // 1 = deterministic single-worker mode

  void validate() const;
};

struct HistoryRow {
  std::size_t iteration = 0;
  std::uint64_t total_env_steps = 0;
  double parent_fitness = 0.0;
  double child_fitness = 0.0;
  double best_fitness = 0.0;
  std::size_t nonempty_buckets = 0;
  double range_min = 0.0;
  double range_max = 0.0;
  bool numeric_failure = false;

  bool operator==(const HistoryRow&) const = default;
};

struct RunHistory {
  std::vector<HistoryRow> rows;

  double final_best() const { return rows.empty() ? 0.0 : rows.back().best_fitness; }
  // First iteration whose best_fitness reaches `threshold`, if any.
  std::optional<std::size_t> first_reaching(double threshold) const;

  bool operator==(const RunHistory&) const = default;
};

struct RunOutcome {
  RunHistory history;
  Solution bootstrap;  // the initial solution with its measured fitness
  Solution best;       // best solution ever inserted, kept even after eviction
};

struct ExecutionResult {
  NetParams params;
  double total_reward = 0.0;
  std::size_t steps = 0;
  bool numeric_failure = false;
};

// Runs `params` for `steps` environment steps: build input, self-modifying
// net step, sample an action, step the environment. Episodes that end are
// reset with weights kept and the reward/action feedback zeroed. A
// NumericError ends the execution early with numeric_failure set.
ExecutionResult evaluate_execute(NetParams params, Environment& env, const InputSpec& spec,
                                 std::size_t steps, Rng& rng, bool self_modify = true);

// Candidate generator applied to a sampled parent before its execution.
using Proposal = std::function<void(NetParams&, Rng&)>;

// The shared archive/sample/execute/insert loop. `propose` may be empty;
// `self_modify` toggles the in-execution weight update.
RunOutcome run_selection_loop(const FmeConfig& config, const EnvFactory& env_factory,
                              const Proposal& propose, bool self_modify);

// Fitness monotonic execution: children are produced only by the network's
// own weight updates during execution.
RunOutcome fme_run(const FmeConfig& config, const EnvFactory& env_factory);

}  // namespace srl
