#pragma once

#include <vector>

#include "rteach/rng.hpp"
#include "rteach/teaching.hpp"

namespace rteach {

// Fixed-capacity ring of teacher transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay buffer: capacity must be positive");
  }

  void push(TeacherTransition tr) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(tr));
    } else {
      items_[head_] = std::move(tr);
    }
    head_ = (head_ + 1) % capacity_;
  }

  size_t size() const { return items_.size(); }
  size_t capacity() const { return capacity_; }

  const TeacherTransition& at(size_t i) const { return items_[i]; }

  // Uniform sample with replacement; requires size() >= n.
  void sample(int n, Rng& rng, std::vector<const TeacherTransition*>& out) const {
    if (size_t(n) > items_.size())
      throw ConfigError("replay buffer: sampling requires size >= batch");
    out.resize(size_t(n));
    for (int i = 0; i < n; ++i)
      out[size_t(i)] = &items_[size_t(rng.uniform_int(int(items_.size())))];
  }

 private:
  size_t capacity_;
  size_t head_ = 0;
  std::vector<TeacherTransition> items_;
};

}  // namespace rteach
