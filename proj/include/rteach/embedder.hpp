#pragma once

#include <span>

#include "rteach/mini_state.hpp"
#include "rteach/nn.hpp"

namespace rteach {

enum class Pooling { Mean, Max };

const char* pooling_name(Pooling p);
Pooling pooling_from_name(const std::string& name);

// Permutation-invariant mini-state encoder: a joint MLP encodes each record,
// pooling collapses the record dimension, appended scalars are concatenated
// after pooling. Parameters/Oblivious variants bypass the set encoder and
// pass their vector straight through.
struct ParameterEmbedder {
  StateVariant variant = StateVariant::Pe0;
  Pooling pooling = Pooling::Mean;
  MlpNetwork joint;  // unused for bypass variants
  int record_width = 0;
  int n_scalars = 0;
  int embed_dim = 0;

  bool bypass() const { return variant_bypasses_encoder(variant); }
  int state_width() const {
    if (variant == StateVariant::Oblivious) return n_scalars;
    if (variant == StateVariant::Parameters) return record_width + n_scalars;
    return embed_dim + n_scalars;
  }

  // hidden_layers counts the joint encoder's hidden layers; 0 makes the
  // encoder a single linear map.
  static ParameterEmbedder make(StateVariant variant, int record_width, int n_scalars,
                                int embed_dim, int hidden_width, int hidden_layers,
                                Pooling pooling, Rng& rng);
};

// Reusable buffers for one embedded batch.
struct EmbedCache {
  Matrix records;           // (B*M) x record_width
  ForwardCache joint_cache;
  Matrix state;             // B x state_width
  std::vector<int> argmax;  // B*embed_dim record indices (max pooling)
  int b = 0;
  int m = 0;
};

// Embeds a batch of mini-states (uniform M and scalar arity) into
// cache.state. Returns a reference to cache.state.
const Matrix& embed_batch(const ParameterEmbedder& pe,
                          std::span<const MiniState* const> batch, EmbedCache& cache);

// Convenience single-state embed.
std::vector<float> embed(const ParameterEmbedder& pe, const MiniState& ms);

// Backward through pooling and the joint encoder given d(state).
// Scalar-slot gradients are inputs and are dropped.
void embed_backward(const ParameterEmbedder& pe, const EmbedCache& cache, const Matrix& dstate,
                    Gradients& grads, Matrix& drecords_scratch, BackwardScratch& scratch);

}  // namespace rteach
