#include "rteach/reward.hpp"

#include <cmath>

namespace rteach {

const char* reward_mode_name(RewardMode m) {
  return m == RewardMode::TimeToThreshold ? "time-to-threshold" : "final-performance";
}

RewardMode reward_mode_from_name(const std::string& name) {
  if (name == "time-to-threshold") return RewardMode::TimeToThreshold;
  if (name == "final-performance") return RewardMode::FinalPerformance;
  throw ConfigError("unknown reward mode '" + name + "'");
}

const char* shaping_name(ShapingKind s) {
  switch (s) {
    case ShapingKind::None: return "none";
    case ShapingKind::Lp: return "lp";
    case ShapingKind::LogLp: return "log-lp";
    case ShapingKind::ClippedSign: return "clipped-sign";
    case ShapingKind::Auc: return "auc";
  }
  return "?";
}

ShapingKind shaping_from_name(const std::string& name) {
  if (name == "none") return ShapingKind::None;
  if (name == "lp") return ShapingKind::Lp;
  if (name == "log-lp") return ShapingKind::LogLp;
  if (name == "clipped-sign") return ShapingKind::ClippedSign;
  if (name == "auc") return ShapingKind::Auc;
  throw ConfigError("unknown shaping kind '" + name + "'");
}

double potential_lp(double m) { return m; }

double potential_log_lp(double m, double log_eps) {
  const double arg = 1.0 - m + log_eps;
  if (arg <= 0.0) throw NumericError("log potential: argument <= 0 even after log_eps");
  return std::log(arg);
}

RewardResult compute_reward(double m_prev, double m_new, const RewardConfig& cfg, int step) {
  if (!std::isfinite(m_prev) || !std::isfinite(m_new))
    throw NumericError("compute_reward: non-finite performance measure");

  RewardResult out;
  if (cfg.mode == RewardMode::FinalPerformance) {
    out.terminal = step >= cfg.horizon;
    out.reward = out.terminal ? m_new : 0.0;
  } else {
    out.terminal = m_new >= cfg.m_star;
    out.reward = out.terminal ? 0.0 : -1.0;
  }

  switch (cfg.shaping) {
    case ShapingKind::None:
      break;
    case ShapingKind::Lp:
      out.reward += cfg.gamma * potential_lp(m_new) - potential_lp(m_prev);
      break;
    case ShapingKind::LogLp:
      out.reward += cfg.gamma * potential_log_lp(m_new, cfg.log_eps) -
                    potential_log_lp(m_prev, cfg.log_eps);
      break;
    case ShapingKind::ClippedSign:
      out.reward += (cfg.gamma * m_new - m_prev > 0.0) ? 1.0 : -1.0;
      break;
    case ShapingKind::Auc:
      // replaces the constant base: still negative, still time-to-threshold
      if (cfg.mode == RewardMode::TimeToThreshold && !out.terminal) out.reward = -1.0 + m_new;
      break;
  }
  if (!std::isfinite(out.reward)) throw NumericError("compute_reward: non-finite reward");
  return out;
}

}  // namespace rteach
