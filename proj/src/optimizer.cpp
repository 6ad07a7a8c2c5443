#include "rteach/optimizer.hpp"

#include <cmath>

namespace rteach {

OptimizerState OptimizerState::sgd(float step_size) {
  OptimizerState o;
  o.kind = OptimizerKind::Sgd;
  o.step_size = step_size;
  return o;
}

OptimizerState OptimizerState::adam(float step_size, float beta1, float beta2, float eps) {
  OptimizerState o;
  o.kind = OptimizerKind::Adam;
  o.step_size = step_size;
  o.beta1 = beta1;
  o.beta2 = beta2;
  o.eps_adam = eps;
  return o;
}

void OptimizerState::reset() {
  t = 0;
  first_moment.clear();
  second_moment.clear();
}

namespace {

void alloc_like(std::vector<DenseLayer>& acc, const MlpNetwork& net) {
  acc.resize(net.layers.size());
  for (size_t i = 0; i < net.layers.size(); ++i) {
    acc[i].weight = Matrix(net.layers[i].weight.rows, net.layers[i].weight.cols);
    acc[i].bias.assign(net.layers[i].bias.size(), 0.0f);
  }
}

bool grads_finite(const Gradients& g) {
  for (const auto& l : g.layers) {
    if (!l.weight.all_finite()) return false;
    for (float v : l.bias)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

void OptimizerState::step(MlpNetwork& net, const Gradients& grads) {
  if (grads.layers.size() != net.layers.size())
    throw DimensionError("optimizer step: gradient layer count mismatch");
  if (!grads_finite(grads)) throw NumericError("optimizer step refused: non-finite gradient");

  if (kind == OptimizerKind::Sgd) {
    ++t;
    for (size_t i = 0; i < net.layers.size(); ++i) {
      auto& w = net.layers[i].weight.data;
      const auto& gw = grads.layers[i].weight.data;
      for (size_t j = 0; j < w.size(); ++j) w[j] -= step_size * gw[j];
      auto& b = net.layers[i].bias;
      const auto& gb = grads.layers[i].bias;
      for (size_t j = 0; j < b.size(); ++j) b[j] -= step_size * gb[j];
    }
    return;
  }

  if (first_moment.empty()) {
    alloc_like(first_moment, net);
    alloc_like(second_moment, net);
  }
  ++t;
  const float corr1 = 1.0f - float(std::pow(double(beta1), double(t)));
  const float corr2 = 1.0f - float(std::pow(double(beta2), double(t)));
  auto update = [&](float* w, const float* g, float* m, float* v, size_t n) {
    for (size_t j = 0; j < n; ++j) {
      m[j] = beta1 * m[j] + (1.0f - beta1) * g[j];
      v[j] = beta2 * v[j] + (1.0f - beta2) * g[j] * g[j];
      const float mhat = m[j] / corr1;
      const float vhat = v[j] / corr2;
      w[j] -= step_size * mhat / (std::sqrt(vhat) + eps_adam);
    }
  };
  for (size_t i = 0; i < net.layers.size(); ++i) {
    update(net.layers[i].weight.data.data(), grads.layers[i].weight.data.data(),
           first_moment[i].weight.data.data(), second_moment[i].weight.data.data(),
           net.layers[i].weight.size());
    update(net.layers[i].bias.data(), grads.layers[i].bias.data(), first_moment[i].bias.data(),
           second_moment[i].bias.data(), net.layers[i].bias.size());
  }
}

}  // namespace rteach
