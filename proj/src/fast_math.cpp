#include "srl/fast_math.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace srl {

namespace {

// Taylor coefficients of tanh(x)/x - 1 in powers of x^2, highest first.
constexpr double kTanhSeries[] = {
    -0.000039278323883316834053, 0.000096915379569294503256, -0.00023912911424355248149,
    0.00059002744094558598138,   -0.0014558343870513182682,  0.0035921280365724810169,
    -0.0088632355299021965689,   0.021869488536155202822,    -0.053968253968253968254,
    0.13333333333333333333,      -0.33333333333333333333,
};

constexpr double kLog2e = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kRoundShift = 0x1.8p52;

// Below this magnitude the series is used; above, 1 - 2/(exp(2x) + 1).
constexpr double kSeriesLimit = 0.2;
// tanh(20) rounds to 1.0 in double precision.
constexpr double kSaturation = 20.0;

inline double tanh_one(double x) {
  const double ax = std::fabs(x);
  const double a = ax > kSaturation ? kSaturation : ax;

  const double a2 = a * a;
  double p = kTanhSeries[0];
  for (int i = 1; i < 11; ++i) p = p * a2 + kTanhSeries[i];
  const double small = a + a * a2 * p;

  // exp(2a) = 2^n * exp(r), |r| <= ln2/2, n extracted via the round-shift trick.
  const double y = 2.0 * a;
  const double shifted = y * kLog2e + kRoundShift;
  const double n = shifted - kRoundShift;
  const double r = (y - n * kLn2Hi) - n * kLn2Lo;
  double e = 1.0 / 479001600.0;
  e = e * r + 1.0 / 39916800.0;
  e = e * r + 1.0 / 3628800.0;
  e = e * r + 1.0 / 362880.0;
  e = e * r + 1.0 / 40320.0;
  e = e * r + 1.0 / 5040.0;
  e = e * r + 1.0 / 720.0;
  e = e * r + 1.0 / 120.0;
  e = e * r + 1.0 / 24.0;
  e = e * r + 1.0 / 6.0;
  e = e * r + 0.5;
  e = e * r + 1.0;
  e = e * r + 1.0;
  const double scale = std::bit_cast<double>((std::bit_cast<std::uint64_t>(shifted) + 1023) << 52);
  const double large = 1.0 - 2.0 / (e * scale + 1.0);

  const double t = a < kSeriesLimit ? small : large;
  return std::copysign(t, x);
}

}  // namespace

void tanh_elementwise(std::span<const double> in, std::span<double> out) {
  const std::size_t n = in.size() < out.size() ? in.size() : out.size();
  const double* src = in.data();
  double* dst = out.data();
  for (std::size_t i = 0; i < n; ++i) dst[i] = tanh_one(src[i]);
}

}  // namespace srl
