#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doctest.h"
#include "srl/fast_math.hpp"

namespace {

std::int64_t ulp_distance(double a, double b) {
  auto key = [](double v) {
    const auto bits = std::bit_cast<std::int64_t>(v);
    return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
  };
  const auto d = key(a) - key(b);
  return d < 0 ? -d : d;
}

double tanh_one(double x) {
  double out = 0.0;
  srl::tanh_elementwise({&x, 1}, {&out, 1});
  return out;
}

}  // namespace

TEST_CASE("tanh kernel stays within 8 ulp of std::tanh") {
  std::vector<double> xs;
  for (double x = -25.0; x <= 25.0; x += 0.0007) xs.push_back(x);
  for (double e = -300; e < 2; e += 0.37) xs.push_back(std::pow(10.0, e));
  std::vector<double> out(xs.size());
  srl::tanh_elementwise(xs, out);
  std::int64_t worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, ulp_distance(out[i], std::tanh(xs[i])));
  CHECK(worst <= 8);
}

TEST_CASE("tanh kernel is odd and saturates exactly") {
  for (double x : {1e-300, 0.013, 0.19999, 0.2, 0.7, 3.3, 19.9, 20.0, 50.0}) {
    CHECK(tanh_one(-x) == -tanh_one(x));
  }
  CHECK(tanh_one(21.0) == 1.0);
  CHECK(tanh_one(-1e6) == -1.0);
  CHECK(tanh_one(0.0) == 0.0);
  CHECK(std::signbit(tanh_one(-0.0)));
}

TEST_CASE("tanh kernel works in place") {
  std::vector<double> v = {-2.0, -0.1, 0.0, 0.5, 4.0};
  const auto expected = v;
  srl::tanh_elementwise(v, v);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(std::tanh(expected[i])).epsilon(1e-14));
}
