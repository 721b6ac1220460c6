#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "srl/network.hpp"
#include "srl/rng.hpp"

namespace srl {

struct Solution {
  NetParams params;
  double fitness = 0.0;       // average reward per step over the lifetime
  std::size_t lifetime = 1;   // environment steps the fitness was measured over
  std::uint64_t stamp = 0;    // insertion order, assigned by the buffer
};

enum class SamplingMode { exponential, greedy };

// Fitness-bucketed least-recently-used store of solutions.
//
// The observed fitness range [range_min, range_max] is split into m equal
// buckets, each a FIFO holding at most `capacity` solutions ordered by stamp.
// The range only ever grows; when it does, every stored solution is moved to
// the bucket matching the new range.
//
// Exponential sampling picks a non-empty bucket i with weight
// exp(exp_coeff * i / (m - 1)) and then a uniform member of that bucket, so
// the probability depends on the fitness range and not on how many
// solutions share it. Greedy sampling returns the best stored solution.
class LruBuffer {
 public:
  LruBuffer(std::size_t num_buckets, std::size_t capacity, double exp_coeff,
            SamplingMode mode = SamplingMode::exponential);

  std::size_t bucket_index(double fitness) const;

  // Assigns the next stamp and returns it.
  std::uint64_t insert(Solution solution);
  void rebucket();

  // Unnormalized selection weight per bucket (0 for empty buckets).
  std::vector<double> bucket_weights() const;
  std::vector<double> bucket_probabilities() const;

  Solution sample(Rng& rng) const;
  const Solution& best() const;

  std::size_t num_buckets() const { return buckets_.size(); }
  std::size_t capacity() const { return capacity_; }
  double exp_coeff() const { return exp_coeff_; }
  SamplingMode mode() const { return mode_; }
  void set_mode(SamplingMode mode) { mode_ = mode; }

  bool empty() const { return size() == 0; }
  std::size_t size() const;
  std::size_t nonempty_buckets() const;
  double range_min() const { return range_min_; }
  double range_max() const { return range_max_; }
  const std::deque<Solution>& bucket(std::size_t i) const { return buckets_.at(i); }

 private:
  void place(Solution&& solution);

  std::vector<std::deque<Solution>> buckets_;
  std::size_t capacity_;
  double exp_coeff_;
  SamplingMode mode_;
  double range_min_ = 0.0;
  double range_max_ = 0.0;
  bool has_range_ = false;
  std::uint64_t next_stamp_ = 0;
};

}  // namespace srl
