#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "rteach/config.hpp"
#include "rteach/student.hpp"
#include "rteach/teaching.hpp"

namespace rteach {

// Builds the student learning process an experiment kind describes. The
// GridWorld (curriculum kinds) must outlive the process.
std::unique_ptr<StudentProcess> build_process(const RunConfig& cfg,
                                              std::shared_ptr<const GridWorld>& env_out);

struct EpisodeRow {
  std::string phase;    // "init" or "train"
  int episode = 0;      // 1-based within its phase
  int steps = 0;        // teacher steps taken
  long substeps = 0;    // student base steps consumed
  double terminal_m = 0.0;
  bool reached = false;
  double epsilon = 0.0;
  double mean_loss = 0.0;
};

struct TrainResult {
  uint64_t seed = 0;
  std::vector<EpisodeRow> rows;
  // First training episode whose greedy policy drove all progress-eval
  // students to the threshold; episodes+1 when never.
  int first_success_episode = 0;
  std::string checkpoint_path;
  bool time_truncated = false;
  std::unique_ptr<DqnTeacher> teacher;
};

// Trains one teacher on one seed, writing train/transitions/evalprog/timing
// CSVs and a checkpoint under cfg.out_dir.
TrainResult run_teacher_training(const RunConfig& cfg, uint64_t seed);

// Runs every seed in cfg.seeds (parallel workers when cfg.workers > 1) and
// writes the resolved-config snapshot.
std::vector<TrainResult> run_training_over_seeds(const RunConfig& cfg);

// Teacher-step policy used during evaluation.
using PolicyFn = std::function<int(const MiniState&, Rng&)>;

PolicyFn greedy_policy(DqnTeacher& teacher);
PolicyFn random_policy(int n_actions);
// Curriculum: always the target start; step-size control: always keep.
PolicyFn scratch_policy(const RunConfig& cfg, const StudentProcess& process);

struct EvalResult {
  // per student; steps == horizon+1 when the threshold was never reached
  std::vector<int> steps_to_threshold;
  std::vector<long> substeps_to_threshold;
  std::vector<uint8_t> reached;
  std::vector<std::vector<double>> curves;
  // curriculum runs: per-phase start-state counts (3 x height x width)
  std::vector<std::vector<long>> heatmaps;
  int n_reached() const;
  double median_steps() const;
  double median_substeps() const;
};

// Steers n fresh students with a frozen policy; writes eval CSVs (and
// per-phase heatmap grids for curriculum runs) under `out_prefix` unless
// empty.
EvalResult evaluate_policy(const PolicyFn& policy, const RunConfig& cfg, int n_students,
                           const std::string& out_prefix);

// Checkpoint front-end: validates the checkpoint against cfg first.
EvalResult evaluate_checkpoint(const std::string& checkpoint_path, const RunConfig& cfg,
                               int n_students, const std::string& out_prefix);

enum class BaselineKind { ConstantStepSweep, RandomTeacher, Scratch };
BaselineKind baseline_kind_from_name(const std::string& name);

struct BaselineResult {
  EvalResult eval;                  // random-teacher / scratch / best sweep arm
  float best_alpha = 0.0f;          // sweep only
  std::vector<float> sweep_alphas;
  std::vector<double> sweep_median_substeps;
};

BaselineResult run_baseline(BaselineKind kind, const RunConfig& cfg,
                            const std::string& out_prefix);

}  // namespace rteach
