#include "srl/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "srl/error.hpp"

namespace srl {

MemoryState to_memory(const NetParams& params) {
  return {flatten_params(params), params.dims()};
}

std::pair<MemoryState, std::vector<double>> memory_step(const MemoryState& state,
                                                        std::span<const double> x) {
  std::size_t expected = 0;
  for (const auto& d : state.arch) expected += d.size();
  if (state.h.size() != expected) throw ContractError("memory size does not match architecture");
  if (state.arch.empty() || x.size() != state.arch.front().n_in)
    throw ContractError("input width does not match architecture");

  auto [next, logits] = net_step(unflatten_params(state.arch, state.h), x);
  return {MemoryState{flatten_params(next), state.arch}, std::move(logits)};
}

TraceComparison trace_compare(const NetParams& initial,
                              const std::vector<std::vector<double>>& inputs, double tol) {
  return trace_compare(initial, to_memory(initial), inputs, tol);
}

TraceComparison trace_compare(const NetParams& initial, const MemoryState& memory_initial,
                              const std::vector<std::vector<double>>& inputs, double tol) {
  TraceComparison cmp;
  NetParams direct = initial;
  NetScratch scratch(direct);
  MemoryState memory = memory_initial;

  for (const auto& x : inputs) {
    const auto y_direct = net_step_inplace(direct, x, scratch);
    auto [next_memory, y_memory] = memory_step(memory, x);
    memory = std::move(next_memory);
    for (std::size_t i = 0; i < y_memory.size(); ++i)
      cmp.max_deviation = std::max(cmp.max_deviation, std::abs(y_direct[i] - y_memory[i]));
    ++cmp.steps;
  }
  cmp.pass = cmp.max_deviation <= tol;
  return cmp;
}

}  // namespace srl
