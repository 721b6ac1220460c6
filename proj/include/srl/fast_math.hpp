#pragma once

#include <span>

namespace srl {

// Elementwise tanh, out[i] = tanh(in[i]). Branch-free so the loop
// vectorizes; within 8 ulp of std::tanh over the whole real line, exact
// +-1 beyond |x| = 20, and odd (tanh(-x) == -tanh(x) bit for bit).
// `in` and `out` may be the same span.
void tanh_elementwise(std::span<const double> in, std::span<double> out);

}  // namespace srl
