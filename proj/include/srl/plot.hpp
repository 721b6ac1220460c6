#pragma once

#include <string>
#include <vector>

#include "srl/experiment.hpp"

namespace srl {

// Per-iteration mean and population standard deviation of best_fitness
// across the seeds present in a history CSV.
struct CurveSummary {
  std::string label;
  std::vector<double> iteration;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t num_seeds = 0;
};

CurveSummary summarize_best(const std::vector<CsvRow>& rows, std::string label);

struct PlotOptions {
  std::string title = "best fitness";
  std::string x_label = "iteration";
  std::string y_label = "best fitness (average reward per step)";
  int width = 720;
  int height = 440;
};

// Self-contained SVG: one line per curve with a shaded +-1 std band.
std::string render_svg(const std::vector<CurveSummary>& curves, const PlotOptions& options = {});

}  // namespace srl
