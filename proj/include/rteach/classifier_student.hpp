#pragma once

#include <functional>
#include <memory>

#include "rteach/optimizer.hpp"
#include "rteach/student.hpp"
#include "rteach/tasks.hpp"

namespace rteach {

// MLP classifier student: relu hidden layers, softmax cross-entropy loss,
// minibatch SGD/Adam at a teacher-controlled step size. Performance is
// full-training-set accuracy.
struct MlpClassifierStudent {
  MlpNetwork net;
  OptimizerState opt;
  std::shared_ptr<const ClassificationTask> task;
  int batch_size = 64;
  Rng rng;
  long grad_steps = 0;

  MlpClassifierStudent(std::shared_ptr<const ClassificationTask> task_in,
                       std::vector<int> hidden_dims, OptimizerKind opt_kind, float step_size,
                       int batch, uint64_t seed);

  void set_task(std::shared_ptr<const ClassificationTask> t);

  // One minibatch forward/backward/update at the current step size.
  void grad_step();

  // Full-training-set accuracy; cached until the parameters change.
  double performance();

  // Softmax probabilities for the given inputs.
  Matrix outputs(const Matrix& inputs) const;

 private:
  double cached_perf_ = -1.0;
  std::vector<int> hidden_dims_;
  // reusable work buffers
  Matrix batch_in_;
  std::vector<int> batch_labels_;
  ForwardCache cache_;
  Gradients grads_;
  BackwardScratch scratch_;
};

// g(x_i) = f_{theta - step}(x_i) - f_theta(x_i): output change after one
// virtual optimizer step on (x, targets). Neither net nor opt is mutated.
// Outputs are softmax probabilities, matching the mini-state records.
Matrix grad_delta(const MlpNetwork& net, const OptimizerState& opt, const Matrix& x,
                  std::span<const int> targets);

// Teaching-MDP wrapper: actions rescale the optimizer step size, the student
// takes k gradient steps per teacher step. Each reset draws a fresh task.
class OptControlProcess : public StudentProcess {
 public:
  using TaskFactory = std::function<std::shared_ptr<const ClassificationTask>(uint64_t seed)>;

  OptControlProcess(TaskFactory factory, std::vector<int> hidden_dims, OptimizerKind opt_kind,
                    float init_step_size, int batch, int horizon, float alpha_min = 1e-5f,
                    float alpha_max = 1.0f);

  void reset(uint64_t seed) override;
  void apply_action(int action) override;
  void advance(int k) override;
  double performance() override { return student_->performance(); }
  MiniState mini_state(const MiniStateSpec& spec, Rng& rng) override;
  const TeacherActionSpace& action_space() const override { return actions_; }
  bool is_param_markov() const override { return opt_kind_ == OptimizerKind::Sgd; }
  int teacher_steps() const override { return teacher_steps_; }
  long base_steps() const override { return student_ ? student_->grad_steps : 0; }

  MlpClassifierStudent& student() { return *student_; }
  float step_size() const { return student_->opt.step_size; }
  int horizon() const { return horizon_; }

 private:
  TaskFactory factory_;
  std::vector<int> hidden_dims_;
  OptimizerKind opt_kind_;
  float init_step_size_;
  int batch_;
  int horizon_;
  float alpha_min_, alpha_max_;
  TeacherActionSpace actions_;
  std::unique_ptr<MlpClassifierStudent> student_;
  int teacher_steps_ = 0;
};

}  // namespace rteach
