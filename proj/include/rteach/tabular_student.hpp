#pragma once

#include <vector>

#include "rteach/gridworld.hpp"
#include "rteach/rng.hpp"
#include "rteach/student.hpp"

namespace rteach {

// Tabular Q-learning agent on a GridWorld. Performance is the greedy-policy
// return from the environment's target start, normalized to [0,1].
struct TabularQStudent {
  const GridWorld* env = nullptr;
  double lr = 0.5;
  double gamma = 0.99;
  double epsilon = 0.01;
  std::vector<double> q;          // n_states x n_actions
  std::vector<uint8_t> visited;   // states seen during training episodes
  Rng rng;
  long episodes_run = 0;

  explicit TabularQStudent(const GridWorld& e);

  void reset(uint64_t seed);

  double q_at(int state, int action) const { return q[size_t(state) * env->n_actions() + action]; }
  double& q_at(int state, int action) { return q[size_t(state) * env->n_actions() + action]; }

  // Lowest index wins ties.
  int greedy_action(int state) const;
  double max_q(int state) const;

  void q_update(int state, int action, double reward, int next_state, bool done);

  // j epsilon-greedy learning episodes launched from start.
  void run_episodes(Cell start, int j);

  // Single greedy rollout from the target start; deterministic environment.
  double performance() const;
};

// Teaching-MDP wrapper: actions choose the student's next start state.
class CurriculumProcess : public StudentProcess {
 public:
  CurriculumProcess(const GridWorld& env, int horizon);

  void reset(uint64_t seed) override;
  void apply_action(int action) override;
  void advance(int k) override;
  double performance() override { return student_.performance(); }
  MiniState mini_state(const MiniStateSpec& spec, Rng& rng) override;
  const TeacherActionSpace& action_space() const override { return actions_; }
  bool is_param_markov() const override { return true; }
  int teacher_steps() const override { return teacher_steps_; }
  long base_steps() const override { return student_.episodes_run; }

  const TabularQStudent& student() const { return student_; }
  TabularQStudent& student() { return student_; }
  int horizon() const { return horizon_; }

 private:
  const GridWorld* env_;
  TabularQStudent student_;
  TeacherActionSpace actions_;
  std::vector<Cell> sample_cells_;  // full-support mini-state inputs
  Cell pending_start_;
  int horizon_;
  int teacher_steps_ = 0;
};

}  // namespace rteach
