#include "srl/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srl/error.hpp"
#include "srl/fast_math.hpp"

namespace srl {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void tanh_into(std::span<const double> in, std::vector<double>& out) {
  out.resize(in.size());
  tanh_elementwise(in, out);
}

// out = W a for a column-major rows x cols matrix. Columns are consumed four
// at a time; the summation order is fixed, so results are reproducible.
void matvec(const double* __restrict w, std::size_t rows, std::size_t cols,
            const double* __restrict a, double* __restrict out) {
  std::size_t c = 0;
  for (std::size_t r = 0; r < rows; ++r) out[r] = 0.0;
  for (; c + 4 <= cols; c += 4) {
    const double a0 = a[c], a1 = a[c + 1], a2 = a[c + 2], a3 = a[c + 3];
    const double* c0 = w + c * rows;
    const double* c1 = c0 + rows;
    const double* c2 = c1 + rows;
    const double* c3 = c2 + rows;
    for (std::size_t r = 0; r < rows; ++r)
      out[r] += (c0[r] * a0 + c1[r] * a1) + (c2[r] * a2 + c3[r] * a3);
  }
  for (; c < cols; ++c) {
    const double ac = a[c];
    const double* col = w + c * rows;
    for (std::size_t r = 0; r < rows; ++r) out[r] += col[r] * ac;
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

}  // namespace

std::vector<LayerDims> NetParams::dims() const {
  std::vector<LayerDims> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back(l.dims);
  return out;
}

std::size_t NetParams::input_width() const {
  return layers.empty() ? 0 : layers.front().dims.n_in;
}

std::size_t NetParams::output_width() const {
  return layers.empty() ? 0 : layers.back().dims.n_out;
}

std::size_t NetParams::size() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.w.size();
  return n;
}

std::vector<LayerDims> make_dims(std::size_t n_in, std::size_t hidden, std::size_t num_layers,
                                 std::size_t n_actions) {
  if (num_layers == 0) throw ConfigError("network needs at least one layer");
  std::vector<LayerDims> dims;
  std::size_t width = n_in;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t out = (l + 1 == num_layers) ? n_actions : hidden;
    dims.push_back({width, out});
    width = out;
  }
  check_chain(dims);
  return dims;
}

void check_chain(std::span<const LayerDims> dims) {
  if (dims.empty()) throw ConfigError("empty layer list");
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (dims[l].n_in == 0 || dims[l].n_out == 0)
      throw ConfigError("layer " + std::to_string(l) + " has a zero width");
    if (l + 1 < dims.size() && dims[l].n_out != dims[l + 1].n_in)
      throw ConfigError("layer " + std::to_string(l) + " outputs " +
                        std::to_string(dims[l].n_out) + " values but layer " +
                        std::to_string(l + 1) + " expects " + std::to_string(dims[l + 1].n_in));
  }
}

NetParams init_params(std::span<const LayerDims> dims, Rng& rng) {
  check_chain(dims);
  NetParams params;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& d : dims) {
    LayerWeights layer(d);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(d.n_in));
    for (std::size_t r = 0; r < d.rows(); ++r) {
      for (std::size_t c = 0; c < d.n_in; ++c) {
        double u = normal(rng);
        while (std::abs(u) > 2.0) u = normal(rng);
        layer.at(r, c) = u * stddev;
      }
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

void LayerScratch::resize(const LayerDims& d) {
  psi_x.resize(d.n_in);
  z.resize(d.rows());
  psi_k.resize(d.n_in);
  psi_q.resize(d.n_in);
  v.resize(d.rows());
  v_bar.resize(d.rows());
}

NetScratch::NetScratch(const NetParams& params) {
  layers.resize(params.layers.size());
  std::size_t widest = 0;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    layers[l].resize(params.layers[l].dims);
    widest = std::max(widest, params.layers[l].dims.n_out);
  }
  buffer.resize(2 * widest);
}

void layer_step_inplace(LayerWeights& layer, std::span<const double> x, std::span<double> y,
                        LayerScratch& s, bool self_modify, std::size_t layer_index) {
  const LayerDims& d = layer.dims;
  const std::size_t rows = d.rows();
  const std::size_t cols = d.n_in;
  if (x.size() != cols)
    throw ShapeError("layer " + std::to_string(layer_index) + " expects " + std::to_string(cols) +
                     " inputs, got " + std::to_string(x.size()));
  if (y.size() != d.n_out) throw ShapeError("output span has the wrong length");
  s.resize(d);

  const double* w = layer.w.data();

  tanh_into(x, s.psi_x);
  matvec(w, rows, cols, s.psi_x.data(), s.z.data());
  if (!all_finite(s.z))
    throw NumericError(layer_index, "non-finite activation in layer " + std::to_string(layer_index));
  std::copy_n(s.z.begin(), d.n_out, y.begin());
  if (!self_modify) return;

  const std::span<const double> z(s.z);
  tanh_into(z.subspan(d.key_begin(), cols), s.psi_k);
  tanh_into(z.subspan(d.query_begin(), cols), s.psi_q);

  matvec(w, rows, cols, s.psi_k.data(), s.v_bar.data());
  matvec(w, rows, cols, s.psi_q.data(), s.v.data());

  double rate[4];
  for (std::size_t b = 0; b < 4; ++b) rate[b] = sigmoid(s.z[d.rate_begin() + b]);

  // Reuse v as the per-row update coefficient sigma(beta)_row * (psi(v) - psi(v_bar)).
  tanh_elementwise(s.v, s.v);
  tanh_elementwise(s.v_bar, s.v_bar);
  const std::size_t bounds[4] = {d.key_begin(), d.query_begin(), d.rate_begin(), rows};
  for (std::size_t b = 0, r = 0; b < 4; ++b)
    for (; r < bounds[b]; ++r) s.v[r] = rate[b] * (s.v[r] - s.v_bar[r]);
  if (!all_finite(s.v))
    throw NumericError(layer_index, "non-finite weight update in layer " + std::to_string(layer_index));

  double* wm = layer.w.data();
  const double* __restrict coeff = s.v.data();
  for (std::size_t c = 0; c < cols; ++c) {
    const double k = s.psi_k[c];
    double* __restrict col = wm + c * rows;
    for (std::size_t r = 0; r < rows; ++r) col[r] += coeff[r] * k;
  }
}

std::pair<LayerWeights, std::vector<double>> layer_step(const LayerWeights& layer,
                                                        std::span<const double> x) {
  if (!all_finite(x)) throw ContractError("layer input must be finite");
  LayerWeights next = layer;
  std::vector<double> y(layer.dims.n_out);
  LayerScratch scratch;
  layer_step_inplace(next, x, y, scratch);
  return {std::move(next), std::move(y)};
}

std::span<const double> net_step_inplace(NetParams& params, std::span<const double> x,
                                         NetScratch& scratch, bool self_modify) {
  if (params.layers.empty()) throw ConfigError("network has no layers");
  std::span<const double> input = x;
  std::size_t half = scratch.buffer.size() / 2;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& layer = params.layers[l];
    // Ping-pong between the two halves of the buffer.
    std::span<double> out(scratch.buffer.data() + (l % 2) * half, layer.dims.n_out);
    layer_step_inplace(layer, input, out, scratch.layers[l], self_modify, l);
    input = out;
  }
  return input;
}

std::pair<NetParams, std::vector<double>> net_step(const NetParams& params,
                                                   std::span<const double> x) {
  if (!params.layers.empty() && x.size() != params.input_width())
    throw ShapeError("network expects " + std::to_string(params.input_width()) + " inputs, got " +
                     std::to_string(x.size()));
  NetParams next = params;
  NetScratch scratch(next);
  auto logits = net_step_inplace(next, x, scratch);
  return {std::move(next), std::vector<double>(logits.begin(), logits.end())};
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double top = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

std::size_t act(std::span<const double> logits, Rng& rng) {
  if (logits.empty()) throw ContractError("act needs at least one logit");
  if (logits.size() == 1) return 0;
  // Allocation-free softmax sampling.
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double v : logits) total += std::exp(v - top);
  std::uniform_real_distribution<double> uniform(0.0, total);
  const double u = uniform(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    acc += std::exp(logits[i] - top);
    if (u < acc) return i;
  }
  return logits.size() - 1;
}

std::size_t InputSpec::width() const {
  return obs_dim + (feed_reward ? 1 : 0) + (feed_prev_action ? action_count : 0) +
         (include_bias ? 1 : 0);
}

void build_input_into(const InputSpec& spec, std::span<const double> obs, double prev_reward,
                      std::optional<std::size_t> prev_action, std::vector<double>& out) {
  if (obs.size() != spec.obs_dim)
    throw ConfigError("observation has " + std::to_string(obs.size()) + " entries, expected " +
                      std::to_string(spec.obs_dim));
  out.assign(obs.begin(), obs.end());
  if (spec.feed_reward) out.push_back(prev_reward);
  if (spec.feed_prev_action) {
    for (std::size_t a = 0; a < spec.action_count; ++a)
      out.push_back(prev_action && *prev_action == a ? 1.0 : 0.0);
  }
  if (spec.include_bias) out.push_back(1.0);
}

std::vector<double> build_input(const InputSpec& spec, std::span<const double> obs,
                                double prev_reward, std::optional<std::size_t> prev_action) {
  std::vector<double> out;
  build_input_into(spec, obs, prev_reward, prev_action, out);
  return out;
}

std::vector<double> flatten_params(const NetParams& params) {
  std::vector<double> flat;
  flat.reserve(params.size());
  for (const auto& layer : params.layers)
    for (std::size_t r = 0; r < layer.dims.rows(); ++r)
      for (std::size_t c = 0; c < layer.dims.n_in; ++c) flat.push_back(layer.at(r, c));
  return flat;
}

NetParams unflatten_params(std::span<const LayerDims> dims, std::span<const double> flat) {
  std::size_t expected = 0;
  for (const auto& d : dims) expected += d.size();
  if (flat.size() != expected)
    throw ShapeError("flat parameter vector has " + std::to_string(flat.size()) +
                     " entries, layout needs " + std::to_string(expected));
  NetParams params;
  std::size_t pos = 0;
  for (const auto& d : dims) {
    LayerWeights layer(d);
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.n_in; ++c) layer.at(r, c) = flat[pos++];
    params.layers.push_back(std::move(layer));
  }
  return params;
}

}  // namespace srl
