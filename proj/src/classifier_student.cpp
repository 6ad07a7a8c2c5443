#include "rteach/classifier_student.hpp"

#include <algorithm>
#include <cmath>

namespace rteach {

MlpClassifierStudent::MlpClassifierStudent(std::shared_ptr<const ClassificationTask> task_in,
                                           std::vector<int> hidden_dims, OptimizerKind opt_kind,
                                           float step_size, int batch, uint64_t seed)
    : task(std::move(task_in)), batch_size(batch), rng(seed), hidden_dims_(std::move(hidden_dims)) {
  if (!task || task->size() == 0) throw ConfigError("classifier student: empty dataset");
  std::vector<int> dims{task->dim()};
  dims.insert(dims.end(), hidden_dims_.begin(), hidden_dims_.end());
  dims.push_back(task->n_classes);
  net = MlpNetwork::make(dims, Activation::Relu, rng);
  opt = opt_kind == OptimizerKind::Sgd ? OptimizerState::sgd(step_size)
                                       : OptimizerState::adam(step_size);
}

void MlpClassifierStudent::set_task(std::shared_ptr<const ClassificationTask> t) {
  if (!t || t->size() == 0) throw ConfigError("classifier student: empty dataset");
  task = std::move(t);
  cached_perf_ = -1.0;
}

void MlpClassifierStudent::grad_step() {
  const int n = task->size();
  const int b = std::min(batch_size, n);
  batch_in_.resize(b, task->dim());
  batch_labels_.resize(size_t(b));
  for (int i = 0; i < b; ++i) {
    const int idx = rng.uniform_int(n);
    std::copy_n(task->inputs.row_ptr(idx), task->dim(), batch_in_.row_ptr(i));
    batch_labels_[size_t(i)] = task->labels[size_t(idx)];
  }
  const Matrix& logits = mlp_forward(net, batch_in_, cache_);
  LossResult loss = softmax_cross_entropy(logits, batch_labels_);
  mlp_backward(net, cache_, loss.dlogits, grads_, false, &scratch_);
  opt.step(net, grads_);
  ++grad_steps;
  cached_perf_ = -1.0;
}

double MlpClassifierStudent::performance() {
  if (cached_perf_ >= 0.0) return cached_perf_;
  const Matrix logits = mlp_forward(net, task->inputs);
  long correct = 0;
  for (int i = 0; i < logits.rows; ++i)
    if (argmax_row(logits, i) == task->labels[size_t(i)]) ++correct;
  cached_perf_ = double(correct) / double(logits.rows);
  return cached_perf_;
}

Matrix MlpClassifierStudent::outputs(const Matrix& inputs) const {
  return softmax_rows(mlp_forward(net, inputs));
}

Matrix grad_delta(const MlpNetwork& net, const OptimizerState& opt, const Matrix& x,
                  std::span<const int> targets) {
  ForwardCache cache;
  Matrix before;
  softmax_rows(mlp_forward(net, x, cache), before);

  LossResult loss = softmax_cross_entropy(cache.acts.back(), targets);
  Gradients grads;
  mlp_backward(net, cache, loss.dlogits, grads);

  MlpNetwork stepped = net;
  OptimizerState vopt = opt;  // keeps accumulated moments for Adam
  vopt.step(stepped, grads);

  Matrix after = softmax_rows(mlp_forward(stepped, x));
  for (size_t i = 0; i < after.data.size(); ++i) after.data[i] -= before.data[i];
  return after;
}

OptControlProcess::OptControlProcess(TaskFactory factory, std::vector<int> hidden_dims,
                                     OptimizerKind opt_kind, float init_step_size, int batch,
                                     int horizon, float alpha_min, float alpha_max)
    : factory_(std::move(factory)),
      hidden_dims_(std::move(hidden_dims)),
      opt_kind_(opt_kind),
      init_step_size_(init_step_size),
      batch_(batch),
      horizon_(horizon),
      alpha_min_(alpha_min),
      alpha_max_(alpha_max) {
  actions_.kind = TeacherActionSpace::Kind::StepSizeRelative;
}

void OptControlProcess::reset(uint64_t seed) {
  auto task = factory_(derive_seed(seed, 0x7A5Bu));
  student_ = std::make_unique<MlpClassifierStudent>(std::move(task), hidden_dims_, opt_kind_,
                                                    init_step_size_, batch_,
                                                    derive_seed(seed, 0x57D1u));
  teacher_steps_ = 0;
}

void OptControlProcess::apply_action(int action) {
  float a = student_->opt.step_size * actions_.factors[size_t(action)];
  a = std::clamp(a, alpha_min_, alpha_max_);
  student_->opt.step_size = a;
}

void OptControlProcess::advance(int k) {
  for (int i = 0; i < k; ++i) student_->grad_step();
  ++teacher_steps_;
}

MiniState OptControlProcess::mini_state(const MiniStateSpec& spec, Rng& rng) {
  MiniState ms;
  ms.variant = spec.variant;
  const ClassificationTask& task = *student_->task;
  const int n_classes = task.n_classes;

  if (spec.variant == StateVariant::Oblivious) {
    ms.scalars = {float(teacher_steps_) / float(horizon_), student_->opt.step_size,
                  float(student_->performance())};
    return ms;
  }
  if (spec.variant == StateVariant::Parameters) {
    std::vector<float> flat;
    student_->net.flatten_to(flat);
    ms.record_width = int(flat.size());
    ms.count = 1;
    ms.records = std::move(flat);
    ms.scalars = {student_->opt.step_size};
    return ms;
  }

  if (spec.m < 1) throw ConfigError("mini_state: M must be >= 1");
  if (task.size() < 1) throw ConfigError("mini_state: empty input source");

  Matrix x(spec.m, task.dim());
  std::vector<int> labels(size_t(spec.m));
  for (int i = 0; i < spec.m; ++i) {
    const int idx = rng.uniform_int(task.size());
    std::copy_n(task.inputs.row_ptr(idx), task.dim(), x.row_ptr(i));
    labels[size_t(i)] = task.labels[size_t(idx)];
  }
  const Matrix probs = student_->outputs(x);

  const bool wants_x =
      spec.variant == StateVariant::PeX || spec.variant == StateVariant::PeXGrad;
  const bool wants_y = spec.variant == StateVariant::PeY;
  const bool wants_grad =
      spec.variant == StateVariant::Pe0Grad || spec.variant == StateVariant::PeXGrad;

  Matrix g;
  if (wants_grad) g = grad_delta(student_->net, student_->opt, x, labels);

  ms.record_width = (wants_x ? task.dim() : 0) + (wants_y ? n_classes : 0) + n_classes +
                    (wants_grad ? n_classes : 0);
  ms.count = spec.m;
  ms.records.resize(size_t(spec.m) * ms.record_width);
  for (int i = 0; i < spec.m; ++i) {
    float* rec = ms.record(i);
    int off = 0;
    if (wants_x) {
      std::copy_n(x.row_ptr(i), task.dim(), rec);
      off += task.dim();
    }
    if (wants_y) {
      std::fill_n(rec + off, n_classes, 0.0f);
      rec[off + labels[size_t(i)]] = 1.0f;
      off += n_classes;
    }
    std::copy_n(probs.row_ptr(i), n_classes, rec + off);
    off += n_classes;
    if (wants_grad) std::copy_n(g.row_ptr(i), n_classes, rec + off);
  }
  // relative step-size actions: the current step size must be observable
  ms.scalars = {student_->opt.step_size};
  return ms;
}

}  // namespace rteach
