#include "rteach/teaching.hpp"

namespace rteach {

TeacherTransition teaching_step(StudentProcess& process,
                                std::shared_ptr<const MiniState> state, double prev_m,
                                int action, int k, const RewardConfig& cfg, int step,
                                const MiniStateSpec& ms_spec, Rng& ms_rng) {
  if (action < 0 || action >= process.action_space().size())
    throw ConfigError("teaching_step: invalid action index");

  process.apply_action(action);
  process.advance(k);
  const double m_new = process.performance();

  const RewardResult rr = compute_reward(prev_m, m_new, cfg, step);

  TeacherTransition tr;
  tr.state = std::move(state);
  tr.action = action;
  tr.reward = rr.reward;
  tr.terminal = rr.terminal;
  tr.truncated = !rr.terminal && step >= cfg.horizon;
  tr.m_new = m_new;
  tr.next_state = std::make_shared<MiniState>(process.mini_state(ms_spec, ms_rng));
  return tr;
}

}  // namespace rteach
