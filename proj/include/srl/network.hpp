#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "srl/rng.hpp"

namespace srl {

// Width of one self-referential layer. The weight matrix has
// rows() = n_out + 2*n_in + 4 rows and n_in columns, partitioned row-wise
// into the output (y), key (k), query (q) and learning-rate (beta) blocks.
struct LayerDims {
  std::size_t n_in = 1;
  std::size_t n_out = 1;

  std::size_t rows() const { return n_out + 2 * n_in + 4; }
  std::size_t size() const { return rows() * n_in; }

  std::size_t key_begin() const { return n_out; }
  std::size_t query_begin() const { return n_out + n_in; }
  std::size_t rate_begin() const { return n_out + 2 * n_in; }

  bool operator==(const LayerDims&) const = default;
};

// Weight matrix of a single self-referential layer. Stored column-major so
// that matrix-vector products and rank-one updates run along contiguous
// columns; flatten_params exposes the row-major layout.
struct LayerWeights {
  LayerDims dims;
  std::vector<double> w;

  LayerWeights() = default;
  explicit LayerWeights(LayerDims d) : dims(d), w(d.size(), 0.0) {}

  double& at(std::size_t row, std::size_t col) { return w[col * dims.rows() + row]; }
  double at(std::size_t row, std::size_t col) const { return w[col * dims.rows() + row]; }

  bool operator==(const LayerWeights&) const = default;
};

// All variables of a solution: the ordered stack of layer weights.
struct NetParams {
  std::vector<LayerWeights> layers;

  std::vector<LayerDims> dims() const;
  std::size_t input_width() const;
  std::size_t output_width() const;
  std::size_t size() const;

  bool operator==(const NetParams&) const = default;
};

// Stack of `num_layers` layers mapping `n_in` inputs to `n_actions` logits
// through hidden layers of width `hidden`.
std::vector<LayerDims> make_dims(std::size_t n_in, std::size_t hidden,
                                 std::size_t num_layers, std::size_t n_actions);

// Throws ConfigError unless every layer's n_out matches the next n_in.
void check_chain(std::span<const LayerDims> dims);

// Entries ~ N(0, 1/n_in) truncated to two standard deviations by resampling.
NetParams init_params(std::span<const LayerDims> dims, Rng& rng);

// Reusable per-layer temporaries so the execution loop does not allocate.
struct LayerScratch {
  std::vector<double> psi_x;
  std::vector<double> z;
  std::vector<double> psi_k;
  std::vector<double> psi_q;
  std::vector<double> v;
  std::vector<double> v_bar;

  void resize(const LayerDims& d);
};

struct NetScratch {
  std::vector<LayerScratch> layers;
  std::vector<double> buffer;  // activations passed between layers

  explicit NetScratch(const NetParams& params);
};

// One step of the self-referential layer, in place:
//   y,k,q,beta = W psi(x);  v_bar = W psi(k);  v = W psi(q)
//   W += sigma(beta)_row * (psi(v) - psi(v_bar)) (outer) psi(k)
// `y` receives the n_out outputs computed from the pre-update weights.
// When `self_modify` is false only the forward pass runs and W is untouched.
// Throws NumericError(layer_index) on non-finite intermediate values.
void layer_step_inplace(LayerWeights& layer, std::span<const double> x,
                        std::span<double> y, LayerScratch& scratch,
                        bool self_modify = true, std::size_t layer_index = 0);

std::pair<LayerWeights, std::vector<double>> layer_step(const LayerWeights& layer,
                                                        std::span<const double> x);

// Runs the layers in order, feeding each layer's y into the next layer.
// Returns a view into scratch holding the last layer's outputs (logits).
std::span<const double> net_step_inplace(NetParams& params, std::span<const double> x,
                                         NetScratch& scratch, bool self_modify = true);

std::pair<NetParams, std::vector<double>> net_step(const NetParams& params,
                                                   std::span<const double> x);

std::vector<double> softmax(std::span<const double> logits);

// Categorical sample from softmax(logits).
std::size_t act(std::span<const double> logits, Rng& rng);

struct InputSpec {
  std::size_t obs_dim = 0;
  std::size_t action_count = 2;
  bool feed_reward = false;
  bool feed_prev_action = false;
  bool include_bias = true;

  std::size_t width() const;
};

// [obs, prev_reward?, one_hot(prev_action)?, 1.0?]
std::vector<double> build_input(const InputSpec& spec, std::span<const double> obs,
                                double prev_reward, std::optional<std::size_t> prev_action);
void build_input_into(const InputSpec& spec, std::span<const double> obs, double prev_reward,
                      std::optional<std::size_t> prev_action, std::vector<double>& out);

// Layers in order, row-major within each layer.
std::vector<double> flatten_params(const NetParams& params);
NetParams unflatten_params(std::span<const LayerDims> dims, std::span<const double> flat);

}  // namespace srl
