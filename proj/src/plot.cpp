#include "srl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <locale>
#include <map>
#include <sstream>
#include <stdexcept>

namespace srl {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

// Tick step of the form {1, 2, 5} * 10^k giving roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double f = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return f * mag;
}

}  // namespace

CurveSummary summarize_best(const std::vector<CsvRow>& rows, std::string label) {
  // iteration -> values across seeds
  std::map<std::size_t, std::vector<double>> by_iteration;
  std::map<std::uint64_t, bool> seeds;
  for (const auto& r : rows) {
    by_iteration[r.row.iteration].push_back(r.row.best_fitness);
    seeds[r.seed] = true;
  }
  CurveSummary s;
  s.label = std::move(label);
  s.num_seeds = seeds.size();
  for (const auto& [it, values] : by_iteration) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    s.iteration.push_back(static_cast<double>(it));
    s.mean.push_back(mean);
    s.stddev.push_back(std::sqrt(var));
  }
  return s;
}

std::string render_svg(const std::vector<CurveSummary>& curves, const PlotOptions& opt) {
  if (curves.empty()) throw std::invalid_argument("nothing to plot");

  double x_min = 0.0, x_max = 1.0;
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.iteration.size(); ++i) {
      x_max = std::max(x_max, c.iteration[i]);
      y_min = std::min(y_min, c.mean[i] - c.stddev[i]);
      y_max = std::max(y_max, c.mean[i] + c.stddev[i]);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("curves have no points");
  if (y_max - y_min < 1e-9) {
    y_min -= 0.05;
    y_max += 0.05;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double left = 70, right = 20, top = 40, bottom = 55;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;
  auto sx = [&](double x) { return left + pw * (x - x_min) / (x_max - x_min); };
  auto sy = [&](double y) { return top + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << escape(opt.title) << "</text>\n";

  // Grid and ticks.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  const double ystep = nice_step(y_max - y_min, 5);
  for (double y = std::ceil(y_min / ystep) * ystep; y <= y_max + 1e-12; y += ystep) {
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(sy(y)) << "\" x2=\"" << fixed(left + pw)
        << "\" y2=\"" << fixed(sy(y)) << "\" stroke=\"#e5e5e5\"/>\n";
    svg << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(sy(y) + 4)
        << "\" text-anchor=\"end\">" << fixed(y, ystep < 0.01 ? 4 : ystep < 0.1 ? 3 : 2) << "</text>\n";
  }
  const double xstep = nice_step(x_max - x_min, 6);
  for (double x = 0.0; x <= x_max + 1e-9; x += xstep) {
    svg << "<line x1=\"" << fixed(sx(x)) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(sx(x))
        << "\" y2=\"" << fixed(top + ph) << "\" stroke=\"#f0f0f0\"/>\n";
    svg << "<text x=\"" << fixed(sx(x)) << "\" y=\"" << fixed(top + ph + 16)
        << "\" text-anchor=\"middle\">" << fixed(x, 0) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw)
      << "\" height=\"" << fixed(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << opt.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(opt.x_label)
      << "</text>\n";
  svg << "<text transform=\"translate(16," << fixed(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* color = kPalette[k % std::size(kPalette)];
    if (c.iteration.empty()) continue;

    svg << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < c.iteration.size(); ++i)
      svg << fixed(sx(c.iteration[i])) << ',' << fixed(sy(c.mean[i] + c.stddev[i])) << ' ';
    for (std::size_t i = c.iteration.size(); i-- > 0;)
      svg << fixed(sx(c.iteration[i])) << ',' << fixed(sy(c.mean[i] - c.stddev[i])) << ' ';
    svg << "\"/>\n";

    svg << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < c.iteration.size(); ++i)
      svg << fixed(sx(c.iteration[i])) << ',' << fixed(sy(c.mean[i])) << ' ';
    svg << "\"/>\n";

    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << fixed(left + pw - 170) << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << fixed(left + pw - 145) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(left + pw - 140) << "\" y=\"" << fixed(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(c.label) << " (n="
        << c.num_seeds << ")</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace srl
