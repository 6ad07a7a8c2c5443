#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rteach/dqn.hpp"
#include "rteach/reward.hpp"

namespace rteach {

enum class ExperimentKind {
  MazeCurriculum,
  FourRoomsCurriculum,
  OptSgd,
  OptAdam,
  OptTransfer,
};

const char* experiment_kind_name(ExperimentKind k);
ExperimentKind experiment_kind_from_name(const std::string& name);

// Full experiment description. Defaults follow the published hyperparameter
// tables for each experiment kind; a config file overrides individual keys.
struct RunConfig {
  ExperimentKind kind = ExperimentKind::OptSgd;

  // [run]
  std::vector<uint64_t> seeds{0};
  int episodes = 200;        // teacher training episodes
  int init_episodes = 0;     // random-policy replay-fill episodes before training
  int eval_students = 5;     // students per policy evaluation
  int eval_period = 5;       // training-progress eval cadence (0 = off)
  int eval_prog_students = 2;
  uint64_t eval_seed = 9000; // shared by evaluations and baselines
  std::string out_dir = "out";
  double time_limit_min = 60.0;
  int workers = 0;           // 0 = hardware concurrency

  // [teacher]
  TeacherConfig teacher;
  size_t replay_capacity = 100000;

  // [reward]
  RewardConfig reward;

  // [student]
  int substeps = 2;          // student base steps per teacher action (k / j)
  int student_hidden_width = 128;
  int student_hidden_layers = 2;
  int student_batch = 64;
  OptimizerKind base_optimizer = OptimizerKind::Sgd;
  float init_step_size = 0.015625f;  // 2^-6
  float alpha_min = 1e-5f;
  float alpha_max = 1.0f;
  double tab_lr = 0.5;
  double tab_gamma = 0.99;
  double tab_epsilon = 0.01;

  // [env]
  std::string map_path;      // curriculum kinds
  int task_dim = 10;
  int task_n = 1000;
  int task_classes = 10;
  int label_net_width = 512; // opt-transfer labelling network
  std::string idx_images;    // opt-transfer evaluation dataset
  std::string idx_labels;
  int idx_cap = 10000;

  static RunConfig defaults(ExperimentKind kind);

  // Parses the line-oriented `key = value` format with [section] headers.
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text, const std::string& origin = "<text>");

  void set(const std::string& section, const std::string& key, const std::string& value);
  void validate() const;

  bool is_curriculum() const {
    return kind == ExperimentKind::MazeCurriculum || kind == ExperimentKind::FourRoomsCurriculum;
  }

  // Deterministic full dump, written beside every run's CSVs.
  std::string snapshot() const;
};

}  // namespace rteach
