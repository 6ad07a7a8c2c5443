#pragma once

#include <memory>

#include "rteach/reward.hpp"
#include "rteach/student.hpp"

namespace rteach {

// One teacher-level transition, ready for replay. terminal and truncated are
// mutually exclusive: truncation marks a horizon timeout the value function
// still bootstraps through.
struct TeacherTransition {
  std::shared_ptr<const MiniState> state;
  std::shared_ptr<const MiniState> next_state;
  int action = 0;
  double reward = 0.0;
  bool terminal = false;
  bool truncated = false;
  double m_new = 0.0;  // performance after the transition (logging)
};

// Applies `action`, advances the student k base steps, measures the new
// performance and packages the transition. `step` is the 1-based teacher
// step index within the episode; `prev_m` must be the performance before
// the action (as returned by the previous call, or measured at reset).
TeacherTransition teaching_step(StudentProcess& process,
                                std::shared_ptr<const MiniState> state, double prev_m,
                                int action, int k, const RewardConfig& cfg, int step,
                                const MiniStateSpec& ms_spec, Rng& ms_rng);

}  // namespace rteach
