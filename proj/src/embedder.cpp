#include "rteach/embedder.hpp"

#include <cstring>

namespace rteach {

const char* pooling_name(Pooling p) { return p == Pooling::Mean ? "mean" : "max"; }

Pooling pooling_from_name(const std::string& name) {
  if (name == "mean") return Pooling::Mean;
  if (name == "max") return Pooling::Max;
  throw ConfigError("unknown pooling '" + name + "'");
}

ParameterEmbedder ParameterEmbedder::make(StateVariant variant, int record_width, int n_scalars,
                                          int embed_dim, int hidden_width, int hidden_layers,
                                          Pooling pooling, Rng& rng) {
  ParameterEmbedder pe;
  pe.variant = variant;
  pe.pooling = pooling;
  pe.record_width = record_width;
  pe.n_scalars = n_scalars;
  pe.embed_dim = embed_dim;
  if (!pe.bypass()) {
    std::vector<int> dims{record_width};
    for (int i = 0; i < hidden_layers; ++i) dims.push_back(hidden_width);
    dims.push_back(embed_dim);
    pe.joint = MlpNetwork::make(dims, Activation::Relu, rng);
  }
  return pe;
}

const Matrix& embed_batch(const ParameterEmbedder& pe,
                          std::span<const MiniState* const> batch, EmbedCache& cache) {
  const int b = int(batch.size());
  if (b == 0) throw DimensionError("embed_batch: empty batch");
  cache.b = b;
  cache.state.resize(b, pe.state_width());

  if (pe.bypass()) {
    for (int i = 0; i < b; ++i) {
      const MiniState& ms = *batch[size_t(i)];
      if (int(ms.scalars.size()) != pe.n_scalars)
        throw DimensionError("embed_batch: scalar arity mismatch");
      float* out = cache.state.row_ptr(i);
      int off = 0;
      if (pe.variant == StateVariant::Parameters) {
        if (ms.record_width != pe.record_width || ms.count != 1)
          throw DimensionError("embed_batch: parameter vector width mismatch");
        std::memcpy(out, ms.records.data(), size_t(pe.record_width) * sizeof(float));
        off = pe.record_width;
      }
      std::memcpy(out + off, ms.scalars.data(), ms.scalars.size() * sizeof(float));
    }
    return cache.state;
  }

  const int m = batch[0]->count;
  cache.m = m;
  cache.records.resize(b * m, pe.record_width);
  for (int i = 0; i < b; ++i) {
    const MiniState& ms = *batch[size_t(i)];
    if (ms.record_width != pe.record_width)
      throw DimensionError("embed_batch: record width mismatch");
    if (ms.count != m) throw DimensionError("embed_batch: M must be uniform within a batch");
    if (int(ms.scalars.size()) != pe.n_scalars)
      throw DimensionError("embed_batch: scalar arity mismatch");
    std::memcpy(cache.records.row_ptr(i * m), ms.records.data(),
                size_t(m) * pe.record_width * sizeof(float));
  }

  const Matrix& enc = mlp_forward(pe.joint, cache.records, cache.joint_cache);
  const int ed = pe.embed_dim;
  if (pe.pooling == Pooling::Max) cache.argmax.assign(size_t(b) * ed, 0);
  for (int i = 0; i < b; ++i) {
    float* out = cache.state.row_ptr(i);
    if (pe.pooling == Pooling::Mean) {
      // double accumulation keeps the pooled value permutation-stable
      for (int j = 0; j < ed; ++j) {
        double acc = 0.0;
        for (int r = 0; r < m; ++r) acc += double(enc.at(i * m + r, j));
        out[j] = float(acc / double(m));
      }
    } else {
      for (int j = 0; j < ed; ++j) {
        int best = 0;
        float bv = enc.at(i * m, j);
        for (int r = 1; r < m; ++r) {
          const float v = enc.at(i * m + r, j);
          if (v > bv) {
            bv = v;
            best = r;
          }
        }
        out[j] = bv;
        cache.argmax[size_t(i) * ed + j] = best;
      }
    }
    const MiniState& ms = *batch[size_t(i)];
    std::memcpy(out + ed, ms.scalars.data(), ms.scalars.size() * sizeof(float));
  }
  return cache.state;
}

std::vector<float> embed(const ParameterEmbedder& pe, const MiniState& ms) {
  EmbedCache cache;
  const MiniState* ptr = &ms;
  const Matrix& st = embed_batch(pe, std::span<const MiniState* const>(&ptr, 1), cache);
  return std::vector<float>(st.data.begin(), st.data.end());
}

void embed_backward(const ParameterEmbedder& pe, const EmbedCache& cache, const Matrix& dstate,
                    Gradients& grads, Matrix& drecords_scratch, BackwardScratch& scratch) {
  if (pe.bypass()) {
    grads.layers.clear();
    return;
  }
  const int b = cache.b, m = cache.m, ed = pe.embed_dim;
  if (dstate.rows != b || dstate.cols != pe.state_width())
    throw DimensionError("embed_backward: dstate shape mismatch");

  drecords_scratch.resize(b * m, ed);
  drecords_scratch.fill(0.0f);
  if (pe.pooling == Pooling::Mean) {
    const float inv_m = 1.0f / float(m);
    for (int i = 0; i < b; ++i) {
      const float* ds = dstate.row_ptr(i);
      for (int r = 0; r < m; ++r) {
        float* dr = drecords_scratch.row_ptr(i * m + r);
        for (int j = 0; j < ed; ++j) dr[j] = ds[j] * inv_m;
      }
    }
  } else {
    for (int i = 0; i < b; ++i) {
      const float* ds = dstate.row_ptr(i);
      for (int j = 0; j < ed; ++j)
        drecords_scratch.at(i * m + cache.argmax[size_t(i) * ed + j], j) = ds[j];
    }
  }
  mlp_backward(pe.joint, cache.joint_cache, drecords_scratch, grads, false, &scratch);
}

}  // namespace rteach
