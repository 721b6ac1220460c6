#pragma once

#include <cstdint>
#include <vector>

#include "srl/fme.hpp"

namespace srl {

// Copy of `params` with i.i.d. N(0, sigma^2) noise added to every entry.
NetParams perturb(const NetParams& params, double sigma, Rng& rng);

// Same archive and sampling as fme_run, but children come from Gaussian
// perturbation of the sampled parent and the in-execution weight update is
// switched off, so executions only measure fitness.
RunOutcome hillclimb_run(const FmeConfig& config, double sigma, const EnvFactory& env_factory);

struct SweepRow {
  double sigma = 0.0;
  double mean_final_best = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best_index = 0;

  double best_sigma() const { return rows.at(best_index).sigma; }
};

// Mean final best_fitness of hillclimb_run over `seeds` for each sigma.
// Ties keep the earlier sigma.
SweepResult variance_sweep(const std::vector<double>& sigmas, const FmeConfig& config,
                           const EnvFactory& env_factory, const std::vector<std::uint64_t>& seeds);

inline const std::vector<double> kDefaultSigmaGrid = {0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0};

}  // namespace srl
