#include "srl/fme.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

#include "srl/error.hpp"

namespace srl {

namespace {

// Stream tags; each run seed fans out into independent streams.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kSampleStream = 2;
constexpr std::uint64_t kBootstrapStream = 3;
constexpr std::uint64_t kExecuteStream = 4;
constexpr std::uint64_t kProposeStream = 5;

Rng iteration_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t iteration) {
  return Rng(mix_seed(mix_seed(seed, stream), iteration));
}

}  // namespace

void FmeConfig::validate() const {
  if (steps_per_execution == 0) throw ConfigError("steps per execution (L) must be positive");
  if (iterations == 0) throw ConfigError("iterations must be positive");
  if (num_buckets == 0) throw ConfigError("number of buckets (m) must be positive");
  if (bucket_capacity == 0) throw ConfigError("bucket capacity (c) must be positive");
  if (workers == 0) throw ConfigError("workers must be positive");
  check_chain(dims);
  if (dims.front().n_in != input.width())
    throw ConfigError("first layer expects " + std::to_string(dims.front().n_in) +
                      " inputs but the input spec produces " + std::to_string(input.width()));
  if (dims.back().n_out != input.action_count)
    throw ConfigError("last layer must output one logit per action");
}

std::optional<std::size_t> RunHistory::first_reaching(double threshold) const {
  for (const auto& row : rows)
    if (row.best_fitness >= threshold) return row.iteration;
  return std::nullopt;
}

ExecutionResult evaluate_execute(NetParams params, Environment& env, const InputSpec& spec,
                                 std::size_t steps, Rng& rng, bool self_modify) {
  if (steps == 0) throw ContractError("execution needs at least one step");
  if (env.obs_dim() != spec.obs_dim || env.action_count() != spec.action_count)
    throw ConfigError("input spec does not match the environment");

  ExecutionResult result;
  NetScratch scratch(params);
  std::vector<double> x;
  StepResult current = env.reset(rng);
  double prev_reward = 0.0;
  std::optional<std::size_t> prev_action;

  try {
    for (std::size_t t = 0; t < steps; ++t) {
      build_input_into(spec, current.obs, prev_reward, prev_action, x);
      const auto logits = net_step_inplace(params, x, scratch, self_modify);
      const std::size_t action = act(logits, rng);
      StepResult next = env.step(action, rng);
      result.total_reward += next.reward;
      ++result.steps;
      if (next.done) {
        current = env.reset(rng);
        prev_reward = 0.0;
        prev_action.reset();
      } else {
        current = std::move(next);
        prev_reward = current.reward;
        prev_action = action;
      }
    }
  } catch (const NumericError&) {
    result.numeric_failure = true;
  }
  result.params = std::move(params);
  return result;
}

RunOutcome run_selection_loop(const FmeConfig& config, const EnvFactory& env_factory,
                              const Proposal& propose, bool self_modify) {
  config.validate();
  const double window = static_cast<double>(config.steps_per_execution);

  RunOutcome outcome;
  LruBuffer buffer(config.num_buckets, config.bucket_capacity, config.exp_coeff, config.mode);
  std::uint64_t total_steps = 0;

  {
    Rng init_rng = make_rng(config.seed, kInitStream);
    NetParams initial = init_params(config.dims, init_rng);
    auto env = env_factory();
    Rng exec_rng = make_rng(config.seed, kBootstrapStream);
    auto result = evaluate_execute(initial, *env, config.input, config.steps_per_execution,
                                   exec_rng, self_modify);
    total_steps = result.steps;
    // The root keeps its initial weights; the bootstrap execution only
    // measures its fitness.
    Solution root{std::move(initial), result.total_reward / window, config.steps_per_execution, 0};
    root.stamp = buffer.insert(root);
    outcome.bootstrap = root;
    outcome.best = root;
  }

  Rng sample_rng = make_rng(config.seed, kSampleStream);
  std::size_t next_iteration = 0;
  std::mutex mutex;

  auto worker = [&] {
    auto env = env_factory();
    for (;;) {
      Solution parent;
      std::size_t it = 0;
      {
        std::lock_guard lock(mutex);
        if (next_iteration >= config.iterations) return;
        it = next_iteration++;
        parent = buffer.sample(sample_rng);
      }
      NetParams candidate = parent.params;
      if (propose) {
        Rng propose_rng = iteration_rng(config.seed, kProposeStream, it);
        propose(candidate, propose_rng);
      }
      Rng exec_rng = iteration_rng(config.seed, kExecuteStream, it);
      auto result = evaluate_execute(std::move(candidate), *env, config.input,
                                     config.steps_per_execution, exec_rng, self_modify);
      Solution child{std::move(result.params), result.total_reward / window,
                     config.steps_per_execution, 0};

      std::lock_guard lock(mutex);
      total_steps += result.steps;
      HistoryRow row;
      row.iteration = outcome.history.rows.size();
      row.total_env_steps = total_steps;
      row.parent_fitness = parent.fitness;
      row.child_fitness = child.fitness;
      row.numeric_failure = result.numeric_failure;
      const bool improved = child.fitness > outcome.best.fitness;
      child.stamp = buffer.insert(improved ? child : std::move(child));
      if (improved) outcome.best = std::move(child);
      row.best_fitness = outcome.best.fitness;
      row.nonempty_buckets = buffer.nonempty_buckets();
      row.range_min = buffer.range_min();
      row.range_max = buffer.range_max();
      outcome.history.rows.push_back(row);
    }
  };

  if (config.workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < config.workers; ++w) pool.emplace_back(worker);
  }
  return outcome;
}

RunOutcome fme_run(const FmeConfig& config, const EnvFactory& env_factory) {
  return run_selection_loop(config, env_factory, {}, true);
}

}  // namespace srl
