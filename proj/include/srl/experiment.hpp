#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srl/fme.hpp"
#include "srl/hillclimb.hpp"

namespace srl {

enum class SearchMode { fme, hillclimb };
enum class Toggle { automatic, on, off };

// Everything needed to reproduce one experiment, with all defaults filled.
struct ExperimentConfig {
  std::string env_name = "bandit";
  SearchMode mode = SearchMode::fme;
  std::size_t iterations = 200;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::size_t steps_per_execution = 1000;
  std::size_t num_buckets = 100;
  std::size_t bucket_capacity = 100;
  double exp_coeff = 20.0;
  SamplingMode sampling = SamplingMode::exponential;
  std::size_t hidden_width = 32;
  std::size_t num_layers = 3;
  Toggle feed_reward = Toggle::automatic;
  bool feed_prev_action = false;
  double noise_sigma = 0.03;
  int swap_low = 50;
  int swap_high = 150;
  std::size_t workers = 1;  // per run
  std::size_t jobs = 1;     // seeds run concurrently
  std::string out_path = "history.csv";
};

// Sets one `key=value` setting; keys use the long flag names without dashes
// (e.g. "env", "noise-sigma", "seeds=0,1,2"). Throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Flat key=value text; blank lines and lines starting with '#' are ignored.
void apply_config_text(ExperimentConfig& config, std::istream& in);
void apply_config_file(ExperimentConfig& config, const std::string& path);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown preset.
ExperimentConfig preset_config(std::string_view name);

bool resolved_feed_reward(const ExperimentConfig& config);
InputSpec input_spec(const ExperimentConfig& config);
FmeConfig fme_config(const ExperimentConfig& config, std::uint64_t seed);
EnvFactory env_factory(const ExperimentConfig& config);

// One line with every effective setting, printed before each run.
std::string describe(const ExperimentConfig& config);

struct SeedRun {
  std::uint64_t seed = 0;
  RunOutcome outcome;
};

// Runs config.mode for every seed (config.jobs at a time), in seed order.
std::vector<SeedRun> run_experiment(const ExperimentConfig& config);

// Average per-step reward of `params` over a fresh execution of `steps`
// steps (self-modification on) in the configured environment.
double fresh_evaluation(const NetParams& params, const ExperimentConfig& config,
                        std::size_t steps, std::uint64_t seed);

// Mean episode length implied by a per-step Cartpole fitness: every failed
// episode costs exactly one unrewarded step. Capped at the episode limit.
double episode_length_from_fitness(double fitness);

inline constexpr std::string_view kHistoryHeader =
    "seed,iteration,total_env_steps,parent_fitness,child_fitness,best_fitness,"
    "nonempty_buckets,range_min,range_max";

struct CsvRow {
  std::uint64_t seed = 0;
  HistoryRow row;
};

void write_history_csv(std::ostream& out, const std::vector<SeedRun>& runs);
// Throws std::runtime_error naming the offending line on malformed input.
std::vector<CsvRow> read_history_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Shortest round-trip decimal text, independent of the global locale.
std::string format_number(double value);

}  // namespace srl
