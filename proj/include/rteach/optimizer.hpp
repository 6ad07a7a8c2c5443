#pragma once

#include "rteach/nn.hpp"

namespace rteach {

enum class OptimizerKind { Sgd, Adam };

// Gradient-descent state over one MlpNetwork's parameters. Adam accumulators
// are allocated to the network's shapes on first step; t counts steps.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Sgd;
  float step_size = 0.01f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps_adam = 1e-8f;
  long t = 0;
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;

  static OptimizerState sgd(float step_size);
  static OptimizerState adam(float step_size, float beta1 = 0.9f, float beta2 = 0.999f,
                             float eps = 1e-8f);

  // Throws NumericError and leaves everything untouched if grads contain
  // non-finite values.
  void step(MlpNetwork& net, const Gradients& grads);

  void reset();
};

}  // namespace rteach
