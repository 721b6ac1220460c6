#include "srl/buffer.hpp"

#include <algorithm>
#include <cmath>

#include "srl/error.hpp"

namespace srl {

LruBuffer::LruBuffer(std::size_t num_buckets, std::size_t capacity, double exp_coeff,
                     SamplingMode mode)
    : buckets_(num_buckets), capacity_(capacity), exp_coeff_(exp_coeff), mode_(mode) {
  if (num_buckets == 0) throw ConfigError("buffer needs at least one bucket");
  if (capacity == 0) throw ConfigError("bucket capacity must be positive");
  if (!std::isfinite(exp_coeff)) throw ConfigError("exponent coefficient must be finite");
}

std::size_t LruBuffer::bucket_index(double fitness) const {
  if (range_max_ == range_min_) return 0;
  const double m = static_cast<double>(buckets_.size());
  const double pos = std::floor(m * (fitness - range_min_) / (range_max_ - range_min_));
  if (!(pos > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(pos), buckets_.size() - 1);
}

void LruBuffer::place(Solution&& solution) {
  auto& b = buckets_[bucket_index(solution.fitness)];
  // Stamps arrive in increasing order except during rebucket, which feeds
  // solutions sorted by stamp, so push_back keeps each FIFO sorted.
  b.push_back(std::move(solution));
  while (b.size() > capacity_) b.pop_front();
}

std::uint64_t LruBuffer::insert(Solution solution) {
  if (!std::isfinite(solution.fitness)) throw ContractError("solution fitness must be finite");
  if (solution.lifetime == 0) throw ContractError("solution lifetime must be positive");
  solution.stamp = next_stamp_++;
  const std::uint64_t stamp = solution.stamp;
  if (!has_range_) {
    range_min_ = range_max_ = solution.fitness;
    has_range_ = true;
  } else if (solution.fitness < range_min_ || solution.fitness > range_max_) {
    range_min_ = std::min(range_min_, solution.fitness);
    range_max_ = std::max(range_max_, solution.fitness);
    rebucket();
  }
  place(std::move(solution));
  return stamp;
}

void LruBuffer::rebucket() {
  std::vector<Solution> all;
  all.reserve(size());
  for (auto& b : buckets_) {
    for (auto& s : b) all.push_back(std::move(s));
    b.clear();
  }
  std::sort(all.begin(), all.end(),
            [](const Solution& a, const Solution& b) { return a.stamp < b.stamp; });
  for (auto& s : all) place(std::move(s));
}

std::vector<double> LruBuffer::bucket_weights() const {
  const std::size_t m = buckets_.size();
  std::vector<double> weights(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (buckets_[i].empty()) continue;
    const double level = m > 1 ? static_cast<double>(i) / static_cast<double>(m - 1) : 0.0;
    weights[i] = std::exp(exp_coeff_ * level);
  }
  return weights;
}

std::vector<double> LruBuffer::bucket_probabilities() const {
  auto w = bucket_weights();
  double total = 0.0;
  for (double v : w) total += v;
  if (total > 0.0)
    for (double& v : w) v /= total;
  return w;
}

const Solution& LruBuffer::best() const {
  const Solution* best = nullptr;
  for (const auto& b : buckets_)
    for (const auto& s : b)
      if (!best || s.fitness > best->fitness ||
          (s.fitness == best->fitness && s.stamp > best->stamp))
        best = &s;
  if (!best) throw ContractError("buffer is empty");
  return *best;
}

Solution LruBuffer::sample(Rng& rng) const {
  if (empty()) throw ContractError("cannot sample from an empty buffer");
  if (mode_ == SamplingMode::greedy) return best();

  const auto weights = bucket_weights();
  double total = 0.0;
  for (double w : weights) total += w;
  std::uniform_real_distribution<double> pick(0.0, total);
  const double u = pick(rng);
  std::size_t chosen = buckets_.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    chosen = i;
    acc += weights[i];
    if (u < acc) break;
  }
  const auto& b = buckets_[chosen];
  std::uniform_int_distribution<std::size_t> member(0, b.size() - 1);
  return b[member(rng)];
}

std::size_t LruBuffer::size() const {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

std::size_t LruBuffer::nonempty_buckets() const {
  return static_cast<std::size_t>(
      std::count_if(buckets_.begin(), buckets_.end(), [](const auto& b) { return !b.empty(); }));
}

}  // namespace srl
