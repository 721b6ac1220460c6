#include "srl/hillclimb.hpp"

#include <cmath>

#include "srl/error.hpp"

namespace srl {

NetParams perturb(const NetParams& params, double sigma, Rng& rng) {
  if (!std::isfinite(sigma) || sigma < 0.0) throw ContractError("sigma must be finite and >= 0");
  NetParams out = params;
  if (sigma == 0.0) return out;
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& layer : out.layers)
    for (double& w : layer.w) w += noise(rng);
  return out;
}

RunOutcome hillclimb_run(const FmeConfig& config, double sigma, const EnvFactory& env_factory) {
  if (!std::isfinite(sigma) || sigma < 0.0) throw ConfigError("noise sigma must be finite and >= 0");
  const Proposal propose = [sigma](NetParams& params, Rng& rng) {
    params = perturb(params, sigma, rng);
  };
  return run_selection_loop(config, env_factory, propose, false);
}

SweepResult variance_sweep(const std::vector<double>& sigmas, const FmeConfig& config,
                           const EnvFactory& env_factory, const std::vector<std::uint64_t>& seeds) {
  if (sigmas.empty()) throw ConfigError("sigma grid is empty");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  SweepResult sweep;
  for (double sigma : sigmas) {
    double total = 0.0;
    for (auto seed : seeds) {
      FmeConfig run = config;
      run.seed = seed;
      total += hillclimb_run(run, sigma, env_factory).history.final_best();
    }
    sweep.rows.push_back({sigma, total / static_cast<double>(seeds.size())});
    if (sweep.rows.back().mean_final_best > sweep.rows[sweep.best_index].mean_final_best)
      sweep.best_index = sweep.rows.size() - 1;
  }
  return sweep;
}

}  // namespace srl
