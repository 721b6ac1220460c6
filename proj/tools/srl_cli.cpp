// Command-line front end: run, sweep, plot, verify-equivalence, preset.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srl/equivalence.hpp"
#include "srl/error.hpp"
#include "srl/experiment.hpp"
#include "srl/plot.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

// Flag names double as config-file keys.
const std::vector<std::pair<std::string, std::string>> kSettingFlags = {
    {"env", "environment: bandit, bandit-swap, cartpole"},
    {"mode", "fme or hillclimb"},
    {"iterations", "selection iterations per seed"},
    {"seeds", "seed list, e.g. 0,1,2 or 0-4"},
    {"steps", "environment steps per execution (L)"},
    {"buckets", "number of fitness buckets (m)"},
    {"capacity", "solutions kept per bucket (c)"},
    {"exp-coeff", "bucket weight exponent coefficient"},
    {"sampling", "exponential or greedy"},
    {"hidden-width", "hidden units per layer"},
    {"num-layers", "number of self-referential layers"},
    {"feed-reward", "auto, on or off"},
    {"feed-prev-action", "on or off"},
    {"noise-sigma", "hill-climbing noise standard deviation"},
    {"swap-low", "shortest arm-swap interval"},
    {"swap-high", "longest arm-swap interval"},
    {"workers", "concurrent executions per run"},
    {"jobs", "seeds run concurrently"},
    {"out", "output CSV path"},
};

struct SettingArgs {
  std::string config_file;
  std::map<std::string, std::optional<std::string>> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "flat key=value config file");
    for (const auto& [key, help] : kSettingFlags) {
      values[key];
      app->add_option("--" + key, values[key], help);
    }
  }

  // defaults < config file < flags
  srl::ExperimentConfig resolve(srl::ExperimentConfig base) const {
    if (!config_file.empty()) srl::apply_config_file(base, config_file);
    for (const auto& [key, value] : values)
      if (value) srl::apply_setting(base, key, *value);
    return base;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw srl::ConfigError("cannot write '" + path + "'");
  return out;
}

void write_runs(const std::string& path, const std::vector<srl::SeedRun>& runs) {
  auto out = open_output(path);
  srl::write_history_csv(out, runs);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void print_summary(const srl::ExperimentConfig& config, const std::vector<srl::SeedRun>& runs) {
  for (const auto& run : runs) {
    const auto& h = run.outcome.history;
    std::cout << "seed " << run.seed << ": final best " << srl::format_number(h.final_best());
    if (const auto it = h.first_reaching(1.0)) std::cout << " (reached 1.0 at iteration " << *it << ")";
    if (config.env_name == "cartpole")
      std::cout << " ~ episode length "
                << srl::format_number(srl::episode_length_from_fitness(h.final_best()));
    std::cout << '\n';
  }
}

int cmd_run(const srl::ExperimentConfig& config) {
  std::cout << srl::describe(config) << std::endl;
  const auto runs = srl::run_experiment(config);
  write_runs(config.out_path, runs);
  print_summary(config, runs);
  std::cout << "wrote " << config.out_path << '\n';
  return 0;
}

int cmd_sweep(const srl::ExperimentConfig& config, const std::vector<double>& sigmas) {
  std::cout << srl::describe(config) << std::endl;
  const auto base = srl::fme_config(config, config.seeds.front());
  const auto sweep = srl::variance_sweep(sigmas, base, srl::env_factory(config), config.seeds);
  auto out = open_output(config.out_path);
  srl::write_sweep_csv(out, sweep);
  for (const auto& row : sweep.rows)
    std::cout << "sigma " << srl::format_number(row.sigma) << ": mean final best "
              << srl::format_number(row.mean_final_best) << '\n';
  std::cout << "best sigma " << srl::format_number(sweep.best_sigma()) << '\n';
  std::cout << "wrote " << config.out_path << '\n';
  return 0;
}

int cmd_plot(const std::vector<std::string>& inputs, std::vector<std::string> labels,
             const std::string& out_svg, const std::string& title) {
  std::vector<srl::CurveSummary> curves;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::ifstream in(inputs[i]);
    if (!in) throw srl::ConfigError("cannot open '" + inputs[i] + "'");
    const auto rows = srl::read_history_csv(in);
    if (rows.empty()) throw std::runtime_error("'" + inputs[i] + "' has no data rows");
    curves.push_back(srl::summarize_best(rows, i < labels.size() ? labels[i] : inputs[i]));
  }
  srl::PlotOptions options;
  if (!title.empty()) options.title = title;
  auto out = open_output(out_svg);
  out << srl::render_svg(curves, options);
  std::cout << "wrote " << out_svg << '\n';
  return 0;
}

int cmd_verify(std::size_t num_seeds, std::size_t steps, double tol, std::size_t input_width,
               std::size_t hidden, std::size_t layers, std::size_t outputs) {
  const auto dims = srl::make_dims(input_width, hidden, layers, outputs);
  bool all_pass = true;
  for (std::size_t seed = 0; seed < num_seeds; ++seed) {
    srl::Rng rng = srl::make_rng(seed, 0xE0);
    const auto params = srl::init_params(dims, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> inputs(steps, std::vector<double>(input_width));
    for (auto& x : inputs)
      for (double& v : x) v = normal(rng);
    const auto cmp = srl::trace_compare(params, inputs, tol);
    all_pass = all_pass && cmp.pass;
    std::cout << "seed " << seed << ": " << (cmp.pass ? "PASS" : "FAIL") << " max deviation "
              << srl::format_number(cmp.max_deviation) << " over " << cmp.steps << " steps\n";
  }
  std::cout << (all_pass ? "equivalence verified" : "equivalence FAILED") << '\n';
  return all_pass ? 0 : kRuntimeError;
}

std::string with_suffix(const std::string& path, const std::string& suffix, const std::string& ext) {
  const auto dot = path.rfind('.');
  const auto stem = dot == std::string::npos ? path : path.substr(0, dot);
  return stem + "-" + suffix + ext;
}

int cmd_preset(const std::string& name, const SettingArgs& args) {
  const auto config = args.resolve(srl::preset_config(name));

  struct Series {
    std::string label;
    srl::ExperimentConfig config;
  };
  std::vector<Series> series;
  if (name == "fig3") {
    auto on = config, off = config;
    on.feed_reward = srl::Toggle::on;
    off.feed_reward = srl::Toggle::off;
    series = {{"reward-input", on}, {"no-reward-input", off}};
  } else {
    auto fme = config, hc = config;
    fme.mode = srl::SearchMode::fme;
    hc.mode = srl::SearchMode::hillclimb;
    series = {{"fme", fme}, {"hillclimb", hc}};
  }

  std::vector<srl::CurveSummary> curves;
  for (auto& s : series) {
    s.config.out_path = with_suffix(config.out_path, s.label, ".csv");
    std::cout << "[" << s.label << "] " << srl::describe(s.config) << std::endl;
    const auto runs = srl::run_experiment(s.config);
    write_runs(s.config.out_path, runs);
    print_summary(s.config, runs);
    if (name == "fig3") {
      for (const auto& run : runs)
        std::cout << "seed " << run.seed << ": fresh 10000-step evaluation of best solution "
                  << srl::format_number(srl::fresh_evaluation(run.outcome.best.params, s.config,
                                                              10000, run.seed))
                  << '\n';
    }
    std::ifstream in(s.config.out_path);
    curves.push_back(srl::summarize_best(srl::read_history_csv(in), s.label));
  }
  const auto svg_path = with_suffix(config.out_path, "plot", ".svg");
  srl::PlotOptions options;
  options.title = name + " (" + config.env_name + ")";
  auto out = open_output(svg_path);
  out << srl::render_svg(curves, options);
  std::cout << "wrote " << svg_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-referential networks improved by fitness monotonic execution"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run fme or hill climbing and write a history CSV");
  SettingArgs run_args;
  run_args.attach(run);

  auto* sweep = app.add_subcommand("sweep", "tune the hill-climbing noise sigma");
  SettingArgs sweep_args;
  sweep_args.attach(sweep);
  std::vector<double> sigmas = srl::kDefaultSigmaGrid;
  sweep->add_option("--sigmas", sigmas, "sigma grid")->delimiter(',');

  auto* plot = app.add_subcommand("plot", "render mean best fitness with a +-1 std band as SVG");
  std::vector<std::string> plot_inputs, plot_labels;
  std::string plot_out = "plot.svg", plot_title;
  plot->add_option("csv", plot_inputs, "history CSV files")->required();
  plot->add_option("-o,--out", plot_out, "output SVG path");
  plot->add_option("--label", plot_labels, "legend label per CSV");
  plot->add_option("--title", plot_title, "plot title");

  auto* verify = app.add_subcommand("verify-equivalence",
                                    "compare the network with its memory-based emulator");
  std::size_t v_seeds = 10, v_steps = 1000, v_input = 2, v_hidden = 32, v_layers = 3, v_outputs = 2;
  double v_tol = 1e-12;
  verify->add_option("--num-seeds", v_seeds, "random initializations to test");
  verify->add_option("--steps", v_steps, "unroll length");
  verify->add_option("--tol", v_tol, "elementwise tolerance");
  verify->add_option("--input-width", v_input, "network input width");
  verify->add_option("--hidden-width", v_hidden, "hidden units per layer");
  verify->add_option("--num-layers", v_layers, "number of layers");
  verify->add_option("--outputs", v_outputs, "network output width");

  auto* preset = app.add_subcommand("preset", "run a named experiment: fig2-left, fig2-right, fig3");
  std::string preset_name;
  preset->add_option("name", preset_name, "preset name")->required();
  SettingArgs preset_args;
  preset_args.attach(preset);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) return cmd_run(run_args.resolve({}));
    if (*sweep) {
      auto config = sweep_args.resolve({});
      if (!sweep_args.values.at("out")) config.out_path = "sweep.csv";
      return cmd_sweep(config, sigmas);
    }
    if (*plot) return cmd_plot(plot_inputs, plot_labels, plot_out, plot_title);
    if (*verify) return cmd_verify(v_seeds, v_steps, v_tol, v_input, v_hidden, v_layers, v_outputs);
    if (*preset) return cmd_preset(preset_name, preset_args);
  } catch (const srl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
