#pragma once

#include <string>

#include "rteach/embedder.hpp"
#include "rteach/optimizer.hpp"
#include "rteach/replay.hpp"

namespace rteach {

struct TeacherConfig {
  StateVariant variant = StateVariant::Pe0;
  int mini_state_m = 32;
  Pooling pooling = Pooling::Mean;
  int embed_dim = 64;
  int encoder_hidden = 256;
  int encoder_layers = 2;
  int qhead_hidden = 256;
  bool double_dqn = true;
  float lr = 1e-3f;
  int batch = 256;
  int sync_period = 100;
  double gamma = 0.99;
  double eps_start = 0.5;
  double eps_decay = 0.99;
  double eps_floor = 0.01;
};

// DQN/DoubleDQN agent over mini-state observations. The Parameter Embedder
// and the action-value head train jointly on a single MSE loss; the target
// network is a frozen copy of both, refreshed every sync_period updates.
class DqnTeacher {
 public:
  DqnTeacher(const TeacherConfig& cfg, int record_width, int n_scalars, int n_actions,
             Rng& rng);

  const TeacherConfig& config() const { return cfg_; }
  int n_actions() const { return n_actions_; }
  int record_width() const { return record_width_; }
  int n_scalars() const { return n_scalars_; }

  std::vector<float> q_values(const MiniState& ms);

  // Epsilon-greedy over the online network; ties to the lowest index.
  int select_action(const MiniState& ms, double eps, Rng& rng);
  int greedy_action(const MiniState& ms) { return select_action(ms, 0.0, unused_rng_); }

  // Bootstrapped target for one transition (terminal stops, truncation
  // bootstraps).
  double dqn_target(const TeacherTransition& tr);

  // One minibatch MSE update; returns the loss. Syncs the target every
  // sync_period calls.
  double train_step(const ReplayBuffer& replay, Rng& rng);

  void sync_target();
  long train_calls() const { return train_calls_; }

  double epsilon_for_episode(int episode) const;

  const ParameterEmbedder& embedder() const { return embedder_; }
  const MlpNetwork& qhead() const { return qhead_; }
  const ParameterEmbedder& target_embedder() const { return target_embedder_; }
  const MlpNetwork& target_qhead() const { return target_qhead_; }

  // Flat binary checkpoint of the online parameters plus a config header;
  // round-trips bitwise. Loading restores the target as a copy.
  void save(const std::string& path) const;
  static DqnTeacher load(const std::string& path);

 private:
  DqnTeacher() = default;
  void forward_q(const ParameterEmbedder& pe, const MlpNetwork& head,
                 std::span<const MiniState* const> batch, EmbedCache& ecache,
                 ForwardCache& qcache, Matrix& q_out);

  TeacherConfig cfg_;
  int record_width_ = 0;
  int n_scalars_ = 0;
  int n_actions_ = 0;
  ParameterEmbedder embedder_;
  MlpNetwork qhead_;
  ParameterEmbedder target_embedder_;
  MlpNetwork target_qhead_;
  OptimizerState opt_embed_;
  OptimizerState opt_head_;
  long train_calls_ = 0;
  Rng unused_rng_;

  // reusable training buffers
  std::vector<const TeacherTransition*> sample_;
  std::vector<const MiniState*> ms_batch_;
  EmbedCache ecache_s_, ecache_tmp_;
  ForwardCache qcache_s_, qcache_tmp_;
  Matrix q_s_, q_next_online_, q_next_target_, dq_, dstate_, drecords_;
  Gradients grads_head_, grads_embed_;
  BackwardScratch scratch_;
};

}  // namespace rteach
