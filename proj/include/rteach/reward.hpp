#pragma once

#include <string>

#include "rteach/common.hpp"

namespace rteach {

enum class RewardMode { TimeToThreshold, FinalPerformance };
enum class ShapingKind { None, Lp, LogLp, ClippedSign, Auc };

const char* reward_mode_name(RewardMode m);
RewardMode reward_mode_from_name(const std::string& name);
const char* shaping_name(ShapingKind s);
ShapingKind shaping_from_name(const std::string& name);

struct RewardConfig {
  RewardMode mode = RewardMode::TimeToThreshold;
  ShapingKind shaping = ShapingKind::None;
  double m_star = 0.95;    // threshold, time-to-threshold mode only
  double gamma = 0.99;     // shared by shaping and teacher returns
  int horizon = 200;       // max teacher steps per episode
  double log_eps = 1e-6;   // stabilizer for the log potential
};

struct RewardResult {
  double reward = 0.0;
  bool terminal = false;
};

// Reward for arriving at performance m_new from m_prev on teacher step
// `step` (1-based). Time-to-threshold: -1 until m_new >= m_star, which
// terminates; shaping added on top. Final-performance: 0 until the horizon
// step, which pays m_new and terminates.
RewardResult compute_reward(double m_prev, double m_new, const RewardConfig& cfg, int step);

// Shaping potentials, exposed for the telescoping identity.
double potential_lp(double m);
double potential_log_lp(double m, double log_eps);

}  // namespace rteach
