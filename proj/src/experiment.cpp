#include "srl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "srl/error.hpp"

namespace srl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

std::size_t parse_positive(std::string_view key, std::string_view text) {
  const auto v = parse_number<std::size_t>(key, text);
  if (v == 0) throw ConfigError(std::string(key) + " must be positive");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto dash = item.find('-');
    if (dash != std::string_view::npos && dash > 0) {
      const auto lo = parse_number<std::uint64_t>("seeds", item.substr(0, dash));
      const auto hi = parse_number<std::uint64_t>("seeds", item.substr(dash + 1));
      if (hi < lo) throw ConfigError("seed range must be ascending");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_number<std::uint64_t>("seeds", item));
    }
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  return seeds;
}

const char* to_string(SearchMode m) { return m == SearchMode::fme ? "fme" : "hillclimb"; }
const char* to_string(SamplingMode m) {
  return m == SamplingMode::exponential ? "exponential" : "greedy";
}
const char* to_string(Toggle t) {
  return t == Toggle::automatic ? "auto" : t == Toggle::on ? "on" : "off";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "env") {
    if (!is_known_environment(value))
      throw ConfigError("unknown environment '" + std::string(value) +
                        "' (expected bandit, bandit-swap or cartpole)");
    c.env_name = std::string(value);
  } else if (key == "mode") {
    if (value == "fme") c.mode = SearchMode::fme;
    else if (value == "hillclimb") c.mode = SearchMode::hillclimb;
    else throw ConfigError("mode must be fme or hillclimb");
  } else if (key == "iterations") {
    c.iterations = parse_positive(key, value);
  } else if (key == "seeds") {
    c.seeds = parse_seeds(value);
  } else if (key == "steps" || key == "L") {
    c.steps_per_execution = parse_positive(key, value);
  } else if (key == "buckets" || key == "m") {
    c.num_buckets = parse_positive(key, value);
  } else if (key == "capacity" || key == "c") {
    c.bucket_capacity = parse_positive(key, value);
  } else if (key == "exp-coeff") {
    c.exp_coeff = parse_number<double>(key, value);
  } else if (key == "sampling") {
    if (value == "exponential") c.sampling = SamplingMode::exponential;
    else if (value == "greedy") c.sampling = SamplingMode::greedy;
    else throw ConfigError("sampling must be exponential or greedy");
  } else if (key == "hidden-width") {
    c.hidden_width = parse_positive(key, value);
  } else if (key == "num-layers") {
    c.num_layers = parse_positive(key, value);
  } else if (key == "feed-reward") {
    if (value == "auto") c.feed_reward = Toggle::automatic;
    else c.feed_reward = parse_bool(key, value) ? Toggle::on : Toggle::off;
  } else if (key == "feed-prev-action") {
    c.feed_prev_action = parse_bool(key, value);
  } else if (key == "noise-sigma") {
    c.noise_sigma = parse_number<double>(key, value);
    if (!(c.noise_sigma >= 0.0)) throw ConfigError("noise-sigma must be >= 0");
  } else if (key == "swap-low") {
    c.swap_low = parse_number<int>(key, value);
  } else if (key == "swap-high") {
    c.swap_high = parse_number<int>(key, value);
  } else if (key == "workers") {
    c.workers = parse_positive(key, value);
  } else if (key == "jobs") {
    c.jobs = parse_positive(key, value);
  } else if (key == "out") {
    c.out_path = std::string(value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
  if (c.swap_low < 1 || c.swap_high < c.swap_low)
    throw ConfigError("swap interval must satisfy 1 <= swap-low <= swap-high");
}

void apply_config_text(ExperimentConfig& config, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(config, text.substr(0, eq), text.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config_text(config, in);
}

std::vector<std::string> preset_names() { return {"fig2-left", "fig2-right", "fig3"}; }

// Hill-climbing sigmas are the argmax of the default sweep grid over seeds
// 0-4 at each preset's budget.
ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  if (name == "fig2-left") {
    c.env_name = "bandit";
    c.iterations = 200;
    c.noise_sigma = 0.3;
  } else if (name == "fig2-right") {
    c.env_name = "cartpole";
    c.iterations = 5000;
    c.noise_sigma = 0.03;
  } else if (name == "fig3") {
    c.env_name = "bandit-swap";
    c.iterations = 3000;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) +
                      "' (expected fig2-left, fig2-right or fig3)");
  }
  c.out_path = std::string(name) + ".csv";
  return c;
}

bool resolved_feed_reward(const ExperimentConfig& config) {
  switch (config.feed_reward) {
    case Toggle::on: return true;
    case Toggle::off: return false;
    case Toggle::automatic: break;
  }
  return config.env_name == "bandit-swap";
}

InputSpec input_spec(const ExperimentConfig& config) {
  const auto env = env_factory(config)();
  InputSpec spec;
  spec.obs_dim = env->obs_dim();
  spec.action_count = env->action_count();
  spec.feed_reward = resolved_feed_reward(config);
  spec.feed_prev_action = config.feed_prev_action;
  spec.include_bias = true;
  return spec;
}

FmeConfig fme_config(const ExperimentConfig& config, std::uint64_t seed) {
  FmeConfig f;
  f.steps_per_execution = config.steps_per_execution;
  f.iterations = config.iterations;
  f.num_buckets = config.num_buckets;
  f.bucket_capacity = config.bucket_capacity;
  f.exp_coeff = config.exp_coeff;
  f.mode = config.sampling;
  f.seed = seed;
  f.input = input_spec(config);
  f.dims = make_dims(f.input.width(), config.hidden_width, config.num_layers,
                     f.input.action_count);
  f.workers = config.workers;
  return f;
}

EnvFactory env_factory(const ExperimentConfig& config) {
  if (!is_known_environment(config.env_name))
    throw ConfigError("unknown environment '" + config.env_name + "'");
  EnvOptions options{config.swap_low, config.swap_high};
  std::string name = config.env_name;
  return [name, options] { return make_environment(name, options); };
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "resolved config: env=" << c.env_name << " mode=" << to_string(c.mode)
      << " iterations=" << c.iterations << " seeds=";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) out << (i ? "," : "") << c.seeds[i];
  out << " L=" << c.steps_per_execution << " m=" << c.num_buckets << " c=" << c.bucket_capacity
      << " exp-coeff=" << format_number(c.exp_coeff) << " sampling=" << to_string(c.sampling)
      << " hidden-width=" << c.hidden_width << " num-layers=" << c.num_layers
      << " feed-reward=" << (resolved_feed_reward(c) ? "on" : "off") << " ("
      << to_string(c.feed_reward) << ")"
      << " feed-prev-action=" << (c.feed_prev_action ? "on" : "off")
      << " noise-sigma=" << format_number(c.noise_sigma) << " swap-low=" << c.swap_low
      << " swap-high=" << c.swap_high << " workers=" << c.workers << " jobs=" << c.jobs
      << " out=" << c.out_path;
  return out.str();
}

std::vector<SeedRun> run_experiment(const ExperimentConfig& config) {
  if (config.seeds.empty()) throw ConfigError("seed list is empty");
  const auto factory = env_factory(config);
  std::vector<SeedRun> runs(config.seeds.size());
  // Validate before any thread starts.
  fme_config(config, config.seeds.front()).validate();

  auto run_one = [&](std::size_t i) {
    const auto seed = config.seeds[i];
    const auto f = fme_config(config, seed);
    runs[i].seed = seed;
    runs[i].outcome = config.mode == SearchMode::fme ? fme_run(f, factory)
                                                     : hillclimb_run(f, config.noise_sigma, factory);
  };

  if (config.jobs <= 1 || runs.size() == 1) {
    for (std::size_t i = 0; i < runs.size(); ++i) run_one(i);
    return runs;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < std::min(config.jobs, runs.size()); ++j) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

double fresh_evaluation(const NetParams& params, const ExperimentConfig& config, std::size_t steps,
                        std::uint64_t seed) {
  auto env = env_factory(config)();
  Rng rng = make_rng(seed, 0xE7A1);
  const auto result = evaluate_execute(params, *env, input_spec(config), steps, rng, true);
  return result.total_reward / static_cast<double>(steps);
}

double episode_length_from_fitness(double fitness) {
  const double cap = Cartpole::kMaxSteps;
  if (fitness >= 1.0 - 1.0 / cap) return cap;
  return 1.0 / (1.0 - fitness);
}

void write_history_csv(std::ostream& out, const std::vector<SeedRun>& runs) {
  out << kHistoryHeader << '\n';
  for (const auto& run : runs) {
    for (const auto& r : run.outcome.history.rows) {
      out << run.seed << ',' << r.iteration << ',' << r.total_env_steps << ','
          << format_number(r.parent_fitness) << ',' << format_number(r.child_fitness) << ','
          << format_number(r.best_fitness) << ',' << r.nonempty_buckets << ','
          << format_number(r.range_min) << ',' << format_number(r.range_max) << '\n';
    }
  }
}

std::vector<CsvRow> read_history_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV is empty");
  if (trim(line) != kHistoryHeader) throw std::runtime_error("CSV header does not match history schema");
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = trim(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (fields.size() != 9)
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 9 fields, got " +
                               std::to_string(fields.size()));
    try {
      CsvRow r;
      r.seed = parse_number<std::uint64_t>("seed", fields[0]);
      r.row.iteration = parse_number<std::size_t>("iteration", fields[1]);
      r.row.total_env_steps = parse_number<std::uint64_t>("total_env_steps", fields[2]);
      r.row.parent_fitness = parse_number<double>("parent_fitness", fields[3]);
      r.row.child_fitness = parse_number<double>("child_fitness", fields[4]);
      r.row.best_fitness = parse_number<double>("best_fitness", fields[5]);
      r.row.nonempty_buckets = parse_number<std::size_t>("nonempty_buckets", fields[6]);
      r.row.range_min = parse_number<double>("range_min", fields[7]);
      r.row.range_max = parse_number<double>("range_max", fields[8]);
      rows.push_back(r);
    } catch (const ConfigError& e) {
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "sigma,mean_final_best\n";
  for (const auto& row : sweep.rows)
    out << format_number(row.sigma) << ',' << format_number(row.mean_final_best) << '\n';
}

}  // namespace srl
