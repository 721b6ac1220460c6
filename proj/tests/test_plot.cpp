#include <cmath>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "srl/plot.hpp"

using namespace srl;

namespace {

std::vector<CsvRow> rows_from(const std::vector<std::vector<double>>& per_seed) {
  std::vector<CsvRow> rows;
  for (std::size_t s = 0; s < per_seed.size(); ++s)
    for (std::size_t i = 0; i < per_seed[s].size(); ++i) {
      CsvRow r;
      r.seed = s;
      r.row.iteration = i;
      r.row.best_fitness = per_seed[s][i];
      rows.push_back(r);
    }
  return rows;
}

std::vector<std::pair<double, double>> points(const std::string& svg, const std::string& cls) {
  const std::regex re("class=\"" + cls + "\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  std::vector<std::pair<double, double>> out;
  if (!std::regex_search(svg, m, re)) return out;
  std::istringstream in(m[1].str());
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return out;
}

}  // namespace

TEST_CASE("summary uses the population standard deviation across seeds") {
  const auto s = summarize_best(rows_from({{0.2, 0.4, 1.0}, {0.4, 0.8, 1.0}, {0.6, 0.6, 1.0}}), "x");
  CHECK(s.num_seeds == 3);
  REQUIRE(s.mean.size() == 3);
  CHECK(s.mean[0] == doctest::Approx(0.4));
  CHECK(s.stddev[0] == doctest::Approx(std::sqrt(0.08 / 3.0)));
  CHECK(s.mean[1] == doctest::Approx(0.6));
  CHECK(s.stddev[1] == doctest::Approx(std::sqrt(0.08 / 3.0)));
  CHECK(s.stddev[2] == 0.0);
}

TEST_CASE("constant fitness renders a flat line") {
  const auto svg = render_svg({summarize_best(rows_from({{0.7, 0.7, 0.7, 0.7}}), "flat")});
  const auto mean = points(svg, "mean");
  REQUIRE(mean.size() == 4);
  for (const auto& p : mean) CHECK(p.second == mean.front().second);
  CHECK(mean.back().first > mean.front().first);
}

TEST_CASE("single seed gives a zero-width band") {
  const auto svg = render_svg({summarize_best(rows_from({{0.1, 0.5, 0.9}}), "one")});
  const auto band = points(svg, "band");
  const auto mean = points(svg, "mean");
  REQUIRE(band.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(band[i].second == doctest::Approx(mean[i].second));
    CHECK(band[5 - i].second == doctest::Approx(mean[i].second));
  }
}

TEST_CASE("band half-width matches the std in plot units") {
  const auto summary = summarize_best(rows_from({{0.0, 0.2}, {1.0, 0.6}}), "two");
  const auto svg = render_svg({summary});
  const auto band = points(svg, "band");
  const auto mean = points(svg, "mean");
  REQUIRE(band.size() == 4);
  // Pixels per fitness unit from the first point: std there is 0.5.
  const double px_per_unit = (band[3].second - mean[0].second) / 0.5;
  CHECK(px_per_unit > 0.0);
  CHECK(mean[1].second - band[1].second == doctest::Approx(0.2 * px_per_unit).epsilon(0.02));
}

TEST_CASE("svg has a legend entry per curve and escapes labels") {
  const auto a = summarize_best(rows_from({{0.1, 0.2}}), "fme <a&b>");
  const auto b = summarize_best(rows_from({{0.3, 0.4}}), "hillclimb");
  const auto svg = render_svg({a, b});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("fme &lt;a&amp;b&gt; (n=1)") != std::string::npos);
  CHECK(svg.find("hillclimb (n=1)") != std::string::npos);
  CHECK(points(svg, "mean").size() == 2);
  CHECK_THROWS(render_svg({}));
  CHECK_THROWS(render_svg({CurveSummary{}}));
}
