#pragma once

#include <span>
#include <vector>

#include "rteach/matrix.hpp"
#include "rteach/rng.hpp"

namespace rteach {

enum class Activation { Relu, Tanh };

struct DenseLayer {
  Matrix weight;              // in_dim x out_dim
  std::vector<float> bias;    // out_dim
};

// Plain fully-connected network: relu/tanh hidden layers, linear output.
// Softmax, when wanted, is applied at the loss.
struct MlpNetwork {
  std::vector<DenseLayer> layers;
  Activation hidden_activation = Activation::Relu;

  // dims = {in, h1, ..., out}; weights Glorot-initialized, biases zero.
  static MlpNetwork make(const std::vector<int>& dims, Activation act, Rng& rng);

  int input_dim() const { return layers.front().weight.rows; }
  int output_dim() const { return layers.back().weight.cols; }
  size_t param_count() const;

  void flatten_to(std::vector<float>& out) const;
  void unflatten_from(std::span<const float> flat);
};

// Uniform on [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))].
Matrix glorot_init(int rows, int cols, Rng& rng);

// Per-layer activations kept for the backward pass. acts[i] is the
// post-activation output of layer i; the final entry holds the logits.
// The input batch is referenced, not copied, and must outlive the cache.
struct ForwardCache {
  const Matrix* input = nullptr;
  std::vector<Matrix> acts;
};

// Returns a reference to the logits stored inside the cache.
const Matrix& mlp_forward(const MlpNetwork& net, const Matrix& batch, ForwardCache& cache);
Matrix mlp_forward(const MlpNetwork& net, const Matrix& batch);

struct Gradients {
  std::vector<DenseLayer> layers;  // same shapes as the network
  Matrix dinput;                   // filled only when requested

  void resize_like(const MlpNetwork& net);
  void scale(float s);
};

// Exact reverse-mode gradients of the scalar loss whose logit gradient is
// dlogits. Scratch holds reusable intermediate buffers.
struct BackwardScratch {
  Matrix dz;
  Matrix da;
};

void mlp_backward(const MlpNetwork& net, const ForwardCache& cache, const Matrix& dlogits,
                  Gradients& grads, bool want_dinput = false,
                  BackwardScratch* scratch = nullptr);

struct LossResult {
  double loss = 0.0;
  Matrix dlogits;
};

// Mean over the batch of -log softmax(logits)[label]. Max-subtracted softmax;
// loss accumulated in double precision. dlogits = (softmax - onehot)/batch.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels);

// Row-wise softmax probabilities (max-subtracted).
void softmax_rows(const Matrix& logits, Matrix& out);
Matrix softmax_rows(const Matrix& logits);

// Lowest index wins ties.
int argmax_row(const Matrix& m, int row);

}  // namespace rteach
