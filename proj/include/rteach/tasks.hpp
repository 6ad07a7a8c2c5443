#pragma once

#include <string>
#include <vector>

#include "rteach/matrix.hpp"
#include "rteach/rng.hpp"

namespace rteach {

// A fixed labelled classification dataset the student trains on.
struct ClassificationTask {
  Matrix inputs;            // n x dim
  std::vector<int> labels;  // n, in [0, n_classes)
  int n_classes = 10;

  int size() const { return inputs.rows; }
  int dim() const { return inputs.cols; }
};

// Gaussian inputs labelled by their argmax coordinate.
ClassificationTask generate_cluster_task(uint64_t seed, int dim = 10, int n = 1000);

// Gaussian inputs labelled by the argmax output of a freshly initialized
// tanh labelling network (depth matching the student, 512 units per hidden
// layer). Regenerates up to 10 times when one class exceeds half the labels.
ClassificationTask generate_nn_task(uint64_t seed, int dim = 784, int n = 4000,
                                    int hidden_layers = 2, int label_net_width = 512,
                                    int n_classes = 10);

struct IdxDataset {
  Matrix images;            // n x (rows*cols), scaled to [0,1]
  std::vector<int> labels;  // n
  int total_count = 0;      // item count declared by the headers, pre-cap
};

// Parses the big-endian IDX pair (magic 0x803 images / 0x801 labels),
// keeping the first `cap` examples (cap <= 0 keeps everything).
IdxDataset load_idx(const std::string& images_path, const std::string& labels_path, int cap);

}  // namespace rteach
