#pragma once

#include <span>
#include <utility>
#include <vector>

#include "srl/network.hpp"

namespace srl {

// Memory-based emulator of the self-referential network. The architecture
// (layer dims plus the fixed unflatten / step / flatten procedure) is the
// static part; every time-varying number lives in the memory vector h.
struct MemoryState {
  std::vector<double> h;
  std::vector<LayerDims> arch;
};

MemoryState to_memory(const NetParams& params);

std::pair<MemoryState, std::vector<double>> memory_step(const MemoryState& state,
                                                        std::span<const double> x);

struct TraceComparison {
  bool pass = false;
  double max_deviation = 0.0;
  std::size_t steps = 0;
};

// Unrolls the self-referential network and the memory emulator from the same
// initial parameters over `inputs` and compares the output sequences.
TraceComparison trace_compare(const NetParams& initial,
                              const std::vector<std::vector<double>>& inputs, double tol);

// Same, with the emulator started from an explicitly given memory.
TraceComparison trace_compare(const NetParams& initial, const MemoryState& memory_initial,
                              const std::vector<std::vector<double>>& inputs, double tol);

}  // namespace srl
