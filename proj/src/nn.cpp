#include "rteach/nn.hpp"

#include <cmath>
#include <cstring>

namespace rteach {

Matrix glorot_init(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw DimensionError("glorot_init: dimensions must be >= 1");
  Matrix m(rows, cols);
  const double limit = std::sqrt(6.0 / double(rows + cols));
  for (float& v : m.data) v = float(rng.uniform(-limit, limit));
  return m;
}

MlpNetwork MlpNetwork::make(const std::vector<int>& dims, Activation act, Rng& rng) {
  if (dims.size() < 2) throw DimensionError("MlpNetwork::make: need at least in/out dims");
  MlpNetwork net;
  net.hidden_activation = act;
  net.layers.reserve(dims.size() - 1);
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer layer;
    layer.weight = glorot_init(dims[i], dims[i + 1], rng);
    layer.bias.assign(size_t(dims[i + 1]), 0.0f);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

size_t MlpNetwork::param_count() const {
  size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

void MlpNetwork::flatten_to(std::vector<float>& out) const {
  out.clear();
  out.reserve(param_count());
  for (const auto& l : layers) {
    out.insert(out.end(), l.weight.data.begin(), l.weight.data.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
}

void MlpNetwork::unflatten_from(std::span<const float> flat) {
  if (flat.size() != param_count()) throw DimensionError("unflatten: size mismatch");
  size_t off = 0;
  for (auto& l : layers) {
    std::memcpy(l.weight.data.data(), flat.data() + off, l.weight.size() * sizeof(float));
    off += l.weight.size();
    std::memcpy(l.bias.data(), flat.data() + off, l.bias.size() * sizeof(float));
    off += l.bias.size();
  }
}

namespace {

void add_bias_rows(Matrix& m, const std::vector<float>& bias) {
  for (int r = 0; r < m.rows; ++r) {
    float* p = m.row_ptr(r);
    for (int c = 0; c < m.cols; ++c) p[c] += bias[size_t(c)];
  }
}

void apply_activation(Matrix& m, Activation act) {
  if (act == Activation::Relu) {
    for (float& v : m.data) v = v > 0.0f ? v : 0.0f;
  } else {
    for (float& v : m.data) v = std::tanh(v);
  }
}

}  // namespace

const Matrix& mlp_forward(const MlpNetwork& net, const Matrix& batch, ForwardCache& cache) {
  if (batch.cols != net.input_dim())
    throw DimensionError("mlp_forward: batch width does not match input dim");
  const size_t depth = net.layers.size();
  cache.input = &batch;
  cache.acts.resize(depth);
  const Matrix* cur = &batch;
  for (size_t i = 0; i < depth; ++i) {
    Matrix& out = cache.acts[i];
    matmul(*cur, net.layers[i].weight, out);
    add_bias_rows(out, net.layers[i].bias);
    if (i + 1 < depth) apply_activation(out, net.hidden_activation);
    cur = &out;
  }
  return cache.acts.back();
}

Matrix mlp_forward(const MlpNetwork& net, const Matrix& batch) {
  ForwardCache cache;
  mlp_forward(net, batch, cache);
  return std::move(cache.acts.back());
}

void Gradients::resize_like(const MlpNetwork& net) {
  layers.resize(net.layers.size());
  for (size_t i = 0; i < net.layers.size(); ++i) {
    layers[i].weight.resize(net.layers[i].weight.rows, net.layers[i].weight.cols);
    layers[i].bias.assign(net.layers[i].bias.size(), 0.0f);
  }
}

void Gradients::scale(float s) {
  for (auto& l : layers) {
    for (float& v : l.weight.data) v *= s;
    for (float& v : l.bias) v *= s;
  }
  for (float& v : dinput.data) v *= s;
}

namespace {

void colsum(const Matrix& m, std::vector<float>& out) {
  out.assign(size_t(m.cols), 0.0f);
  for (int r = 0; r < m.rows; ++r) {
    const float* p = m.row_ptr(r);
    for (int c = 0; c < m.cols; ++c) out[size_t(c)] += p[c];
  }
}

// dz *= act'(post_activation)
void apply_activation_grad(Matrix& dz, const Matrix& post, Activation act) {
  if (act == Activation::Relu) {
    // derivative at exactly 0 defined as 0
    for (size_t i = 0; i < dz.data.size(); ++i)
      if (post.data[i] <= 0.0f) dz.data[i] = 0.0f;
  } else {
    for (size_t i = 0; i < dz.data.size(); ++i)
      dz.data[i] *= 1.0f - post.data[i] * post.data[i];
  }
}

}  // namespace

void mlp_backward(const MlpNetwork& net, const ForwardCache& cache, const Matrix& dlogits,
                  Gradients& grads, bool want_dinput, BackwardScratch* scratch) {
  const int depth = int(net.layers.size());
  if (cache.input == nullptr || int(cache.acts.size()) != depth)
    throw DimensionError("mlp_backward: cache does not match network");
  if (dlogits.rows != cache.acts.back().rows || dlogits.cols != cache.acts.back().cols)
    throw DimensionError("mlp_backward: dlogits shape mismatch");

  grads.resize_like(net);
  BackwardScratch local;
  BackwardScratch& ws = scratch ? *scratch : local;

  ws.dz.resize(dlogits.rows, dlogits.cols);
  ws.dz.data = dlogits.data;
  for (int i = depth - 1; i >= 0; --i) {
    const Matrix& layer_in = (i == 0) ? *cache.input : cache.acts[size_t(i - 1)];
    if (layer_in.cols != net.layers[size_t(i)].weight.rows)
      throw DimensionError("mlp_backward: stale cache");
    matmul_tn(layer_in, ws.dz, grads.layers[size_t(i)].weight);
    colsum(ws.dz, grads.layers[size_t(i)].bias);
    if (i > 0) {
      matmul_nt(ws.dz, net.layers[size_t(i)].weight, ws.da);
      apply_activation_grad(ws.da, cache.acts[size_t(i - 1)], net.hidden_activation);
      std::swap(ws.dz, ws.da);
    } else if (want_dinput) {
      matmul_nt(ws.dz, net.layers[0].weight, grads.dinput);
    }
  }
}

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  if (int(labels.size()) != logits.rows)
    throw DimensionError("softmax_cross_entropy: one label per row required");
  const int n = logits.rows, c = logits.cols;
  LossResult res;
  res.dlogits.resize(n, c);
  double loss = 0.0;
  const float inv_n = 1.0f / float(n);
  for (int r = 0; r < n; ++r) {
    const int label = labels[size_t(r)];
    if (label < 0 || label >= c) throw NumericError("softmax_cross_entropy: label out of range");
    const float* in = logits.row_ptr(r);
    float* out = res.dlogits.row_ptr(r);
    float mx = in[0];
    for (int j = 1; j < c; ++j) mx = std::max(mx, in[j]);
    double denom = 0.0;
    for (int j = 0; j < c; ++j) {
      out[j] = std::exp(in[j] - mx);
      denom += double(out[j]);
    }
    const float inv_denom = float(1.0 / denom);
    for (int j = 0; j < c; ++j) out[j] *= inv_denom;
    loss -= std::log(std::max(double(out[label]), 1e-300));
    out[label] -= 1.0f;
    for (int j = 0; j < c; ++j) out[j] *= inv_n;
  }
  res.loss = loss / double(n);
  return res;
}

void softmax_rows(const Matrix& logits, Matrix& out) {
  out.resize(logits.rows, logits.cols);
  for (int r = 0; r < logits.rows; ++r) {
    const float* in = logits.row_ptr(r);
    float* o = out.row_ptr(r);
    float mx = in[0];
    for (int j = 1; j < logits.cols; ++j) mx = std::max(mx, in[j]);
    double denom = 0.0;
    for (int j = 0; j < logits.cols; ++j) {
      o[j] = std::exp(in[j] - mx);
      denom += double(o[j]);
    }
    const float inv = float(1.0 / denom);
    for (int j = 0; j < logits.cols; ++j) o[j] *= inv;
  }
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out;
  softmax_rows(logits, out);
  return out;
}

int argmax_row(const Matrix& m, int row) {
  const float* p = m.row_ptr(row);
  int best = 0;
  for (int j = 1; j < m.cols; ++j)
    if (p[j] > p[best]) best = j;
  return best;
}

}  // namespace rteach
