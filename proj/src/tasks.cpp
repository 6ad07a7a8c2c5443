#include "rteach/tasks.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "rteach/common.hpp"
#include "rteach/nn.hpp"

namespace rteach {

ClassificationTask generate_cluster_task(uint64_t seed, int dim, int n) {
  Rng rng(derive_seed(seed, 0xC1A5));
  ClassificationTask task;
  task.n_classes = dim;
  task.inputs.resize(n, dim);
  task.labels.resize(size_t(n));
  for (float& v : task.inputs.data) v = rng.normal_f();
  for (int i = 0; i < n; ++i) task.labels[size_t(i)] = argmax_row(task.inputs, i);
  return task;
}

ClassificationTask generate_nn_task(uint64_t seed, int dim, int n, int hidden_layers,
                                    int label_net_width, int n_classes) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    Rng rng(derive_seed(seed, 0x4E4E + uint64_t(attempt)));
    ClassificationTask task;
    task.n_classes = n_classes;
    task.inputs.resize(n, dim);
    for (float& v : task.inputs.data) v = rng.normal_f();

    std::vector<int> dims{dim};
    for (int i = 0; i < hidden_layers; ++i) dims.push_back(label_net_width);
    dims.push_back(n_classes);
    const MlpNetwork label_net = MlpNetwork::make(dims, Activation::Tanh, rng);
    const Matrix outputs = mlp_forward(label_net, task.inputs);

    task.labels.resize(size_t(n));
    std::vector<int> counts(size_t(n_classes), 0);
    for (int i = 0; i < n; ++i) {
      task.labels[size_t(i)] = argmax_row(outputs, i);
      counts[size_t(task.labels[size_t(i)])]++;
    }
    const int max_count = *std::max_element(counts.begin(), counts.end());
    if (max_count * 2 <= n) return task;
  }
  throw NumericError("generate_nn_task: degenerate label distribution after 10 attempts");
}

namespace {

uint32_t read_be32(std::ifstream& f, const std::string& path) {
  unsigned char buf[4];
  if (!f.read(reinterpret_cast<char*>(buf), 4))
    throw IoError("idx: truncated header in " + path);
  return (uint32_t(buf[0]) << 24) | (uint32_t(buf[1]) << 16) | (uint32_t(buf[2]) << 8) |
         uint32_t(buf[3]);
}

}  // namespace

IdxDataset load_idx(const std::string& images_path, const std::string& labels_path, int cap) {
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw IoError("idx: cannot open " + images_path);
  if (const uint32_t magic = read_be32(imgs, images_path); magic != 0x00000803u) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "idx: bad image magic 0x%08x", magic);
    throw IoError(std::string(buf) + " in " + images_path);
  }
  const int n_images = int(read_be32(imgs, images_path));
  const int rows = int(read_be32(imgs, images_path));
  const int cols = int(read_be32(imgs, images_path));

  std::ifstream labs(labels_path, std::ios::binary);
  if (!labs) throw IoError("idx: cannot open " + labels_path);
  if (const uint32_t magic = read_be32(labs, labels_path); magic != 0x00000801u) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "idx: bad label magic 0x%08x", magic);
    throw IoError(std::string(buf) + " in " + labels_path);
  }
  const int n_labels = int(read_be32(labs, labels_path));
  if (n_images != n_labels) throw IoError("idx: image/label count mismatch");

  IdxDataset ds;
  ds.total_count = n_images;
  const int keep = (cap > 0 && cap < n_images) ? cap : n_images;
  const int pixels = rows * cols;
  ds.images.resize(keep, pixels);
  ds.labels.resize(size_t(keep));

  std::vector<unsigned char> row(size_t(pixels));
  constexpr float kScale = 1.0f / 255.0f;
  for (int i = 0; i < keep; ++i) {
    if (!imgs.read(reinterpret_cast<char*>(row.data()), pixels))
      throw IoError("idx: truncated image data in " + images_path);
    float* out = ds.images.row_ptr(i);
    for (int j = 0; j < pixels; ++j) out[j] = float(row[size_t(j)]) * kScale;
    unsigned char lab = 0;
    if (!labs.read(reinterpret_cast<char*>(&lab), 1))
      throw IoError("idx: truncated label data in " + labels_path);
    ds.labels[size_t(i)] = int(lab);
  }
  return ds;
}

}  // namespace rteach
