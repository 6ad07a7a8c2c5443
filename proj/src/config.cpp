#include "rteach/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace rteach {

const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::MazeCurriculum: return "maze-curriculum";
    case ExperimentKind::FourRoomsCurriculum: return "four-rooms-curriculum";
    case ExperimentKind::OptSgd: return "opt-sgd";
    case ExperimentKind::OptAdam: return "opt-adam";
    case ExperimentKind::OptTransfer: return "opt-transfer";
  }
  return "?";
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::MazeCurriculum, ExperimentKind::FourRoomsCurriculum,
        ExperimentKind::OptSgd, ExperimentKind::OptAdam, ExperimentKind::OptTransfer}) {
    if (name == experiment_kind_name(k)) return k;
  }
  throw ConfigError("unknown experiment kind '" + name + "'");
}

RunConfig RunConfig::defaults(ExperimentKind kind) {
  RunConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::MazeCurriculum:
      c.episodes = 200;
      c.init_episodes = 0;
      c.substeps = 10;  // student episodes per teacher action
      c.reward = {RewardMode::TimeToThreshold, ShapingKind::Lp, 0.77, 0.99, 60, 1e-6};
      c.teacher.variant = StateVariant::PeOneHotPolicy;
      c.teacher.mini_state_m = 75;
      c.teacher.batch = 128;
      c.teacher.lr = 1e-3f;
      c.teacher.double_dqn = true;
      c.teacher.eps_start = 0.5;
      c.teacher.eps_decay = 0.99;
      c.teacher.eps_floor = 0.01;
      c.eval_students = 5;
      c.eval_period = 10;
      c.map_path = "maps/maze_11x16.txt";
      c.time_limit_min = 30.0;
      break;
    case ExperimentKind::FourRoomsCurriculum:
      c.episodes = 50;
      c.init_episodes = 0;
      c.substeps = 25;
      c.reward = {RewardMode::TimeToThreshold, ShapingKind::Lp, 0.6, 0.99, 50, 1e-6};
      c.teacher.variant = StateVariant::PeQValues;
      c.teacher.mini_state_m = 25;
      c.teacher.batch = 128;
      c.teacher.lr = 0.01f;
      c.teacher.double_dqn = true;
      c.teacher.eps_start = 0.5;
      c.teacher.eps_decay = 0.99;
      c.teacher.eps_floor = 0.01;
      c.eval_students = 5;
      c.eval_period = 10;
      c.map_path = "maps/four_rooms_7x7.txt";
      c.time_limit_min = 30.0;
      break;
    case ExperimentKind::OptSgd:
    case ExperimentKind::OptAdam:
    case ExperimentKind::OptTransfer:
      c.episodes = 200;
      c.init_episodes = 200;
      c.substeps = 2;
      c.teacher.variant = StateVariant::Pe0;
      c.teacher.mini_state_m = 32;
      c.teacher.batch = 256;
      c.teacher.lr = 1e-3f;
      c.teacher.double_dqn = true;
      // constant exploration for the supervised experiments
      c.teacher.eps_start = 0.01;
      c.teacher.eps_decay = 1.0;
      c.teacher.eps_floor = 0.01;
      c.eval_students = 10;
      c.eval_period = 2;
      c.time_limit_min = 45.0;
      if (kind == ExperimentKind::OptSgd) {
        c.reward = {RewardMode::TimeToThreshold, ShapingKind::Lp, 0.95, 0.99, 200, 1e-6};
        c.base_optimizer = OptimizerKind::Sgd;
        c.init_step_size = 0.015625f;
      } else if (kind == ExperimentKind::OptAdam) {
        c.reward = {RewardMode::TimeToThreshold, ShapingKind::Lp, 0.99, 0.99, 400, 1e-6};
        c.base_optimizer = OptimizerKind::Adam;
        c.init_step_size = 1e-3f;
      } else {
        c.reward = {RewardMode::TimeToThreshold, ShapingKind::Lp, 0.95, 0.99, 200, 1e-6};
        c.base_optimizer = OptimizerKind::Adam;
        c.init_step_size = 1e-3f;
        c.task_dim = 784;
        c.task_n = 4000;
        c.student_batch = 128;
      }
      break;
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

}  // namespace

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  try {
    if (section == "run") {
      if (key == "seeds") {
        seeds.clear();
        std::istringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          tok = trim(tok);
          if (!tok.empty()) seeds.push_back(std::stoull(tok));
        }
      } else if (key == "episodes") {
        episodes = std::stoi(value);
      } else if (key == "init_episodes") {
        init_episodes = std::stoi(value);
      } else if (key == "eval_students") {
        eval_students = std::stoi(value);
      } else if (key == "eval_period") {
        eval_period = std::stoi(value);
      } else if (key == "eval_prog_students") {
        eval_prog_students = std::stoi(value);
      } else if (key == "eval_seed") {
        eval_seed = std::stoull(value);
      } else if (key == "out_dir") {
        out_dir = value;
      } else if (key == "time_limit_min") {
        time_limit_min = std::stod(value);
      } else if (key == "workers") {
        workers = std::stoi(value);
      } else {
        throw ConfigError("config: unknown key run." + key);
      }
    } else if (section == "teacher") {
      if (key == "variant") {
        teacher.variant = variant_from_name(value);
      } else if (key == "mini_state_m") {
        teacher.mini_state_m = std::stoi(value);
      } else if (key == "pooling") {
        teacher.pooling = pooling_from_name(value);
      } else if (key == "embed_dim") {
        teacher.embed_dim = std::stoi(value);
      } else if (key == "encoder_hidden") {
        teacher.encoder_hidden = std::stoi(value);
      } else if (key == "encoder_layers") {
        teacher.encoder_layers = std::stoi(value);
      } else if (key == "qhead_hidden") {
        teacher.qhead_hidden = std::stoi(value);
      } else if (key == "double_dqn") {
        teacher.double_dqn = parse_bool(value, key);
      } else if (key == "lr") {
        teacher.lr = std::stof(value);
      } else if (key == "batch") {
        teacher.batch = std::stoi(value);
      } else if (key == "sync_period") {
        teacher.sync_period = std::stoi(value);
      } else if (key == "replay_capacity") {
        replay_capacity = std::stoull(value);
      } else if (key == "eps_start") {
        teacher.eps_start = std::stod(value);
      } else if (key == "eps_decay") {
        teacher.eps_decay = std::stod(value);
      } else if (key == "eps_floor") {
        teacher.eps_floor = std::stod(value);
      } else {
        throw ConfigError("config: unknown key teacher." + key);
      }
    } else if (section == "reward") {
      if (key == "mode") {
        reward.mode = reward_mode_from_name(value);
      } else if (key == "shaping") {
        reward.shaping = shaping_from_name(value);
      } else if (key == "m_star") {
        reward.m_star = std::stod(value);
      } else if (key == "gamma") {
        reward.gamma = std::stod(value);
        teacher.gamma = reward.gamma;  // one discount for shaping and returns
      } else if (key == "horizon") {
        reward.horizon = std::stoi(value);
      } else if (key == "log_eps") {
        reward.log_eps = std::stod(value);
      } else {
        throw ConfigError("config: unknown key reward." + key);
      }
    } else if (section == "student") {
      if (key == "substeps") {
        substeps = std::stoi(value);
      } else if (key == "hidden_width") {
        student_hidden_width = std::stoi(value);
      } else if (key == "hidden_layers") {
        student_hidden_layers = std::stoi(value);
      } else if (key == "batch") {
        student_batch = std::stoi(value);
      } else if (key == "base_optimizer") {
        if (value == "sgd") {
          base_optimizer = OptimizerKind::Sgd;
        } else if (value == "adam") {
          base_optimizer = OptimizerKind::Adam;
        } else {
          throw ConfigError("config: unknown base optimizer '" + value + "'");
        }
      } else if (key == "init_step_size") {
        init_step_size = std::stof(value);
      } else if (key == "alpha_min") {
        alpha_min = std::stof(value);
      } else if (key == "alpha_max") {
        alpha_max = std::stof(value);
      } else if (key == "tab_lr") {
        tab_lr = std::stod(value);
      } else if (key == "tab_gamma") {
        tab_gamma = std::stod(value);
      } else if (key == "tab_epsilon") {
        tab_epsilon = std::stod(value);
      } else {
        throw ConfigError("config: unknown key student." + key);
      }
    } else if (section == "env") {
      if (key == "map") {
        map_path = value;
      } else if (key == "dim") {
        task_dim = std::stoi(value);
      } else if (key == "n") {
        task_n = std::stoi(value);
      } else if (key == "classes") {
        task_classes = std::stoi(value);
      } else if (key == "label_net_width") {
        label_net_width = std::stoi(value);
      } else if (key == "idx_images") {
        idx_images = value;
      } else if (key == "idx_labels") {
        idx_labels = value;
      } else if (key == "idx_cap") {
        idx_cap = std::stoi(value);
      } else {
        throw ConfigError("config: unknown key env." + key);
      }
    } else {
      throw ConfigError("config: unknown section [" + section + "]");
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("config: bad value for " + section + "." + key + ": '" + value + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("config: value out of range for " + section + "." + key);
  }
}

RunConfig RunConfig::parse_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  // the kind must come first so defaults are in place before overrides
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> entries;
  std::string section;
  std::string kind_value;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key before any [section]");
    if (section == "run" && key == "kind") {
      kind_value = value;
    } else {
      entries.push_back({section, {key, value}});
    }
  }
  if (kind_value.empty()) throw ConfigError(origin + ": run.kind is required");

  RunConfig cfg = defaults(experiment_kind_from_name(kind_value));
  for (const auto& [sec, kv] : entries) cfg.set(sec, kv.first, kv.second);
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_text(ss.str(), path);
}

void RunConfig::validate() const {
  if (seeds.empty()) throw ConfigError("config: at least one seed required");
  if (episodes < 1) throw ConfigError("config: episodes must be >= 1");
  if (init_episodes < 0) throw ConfigError("config: init_episodes must be >= 0");
  if (reward.horizon < 1) throw ConfigError("config: horizon must be >= 1");
  if (reward.gamma < 0.0 || reward.gamma > 1.0) throw ConfigError("config: gamma not in [0,1]");
  if (substeps < 1) throw ConfigError("config: substeps must be >= 1");
  if (teacher.mini_state_m < 1) throw ConfigError("config: mini_state_m must be >= 1");
  if (teacher.batch < 1) throw ConfigError("config: teacher batch must be >= 1");
  if (replay_capacity < size_t(teacher.batch))
    throw ConfigError("config: replay capacity below teacher batch");
  if (init_step_size <= 0.0f) throw ConfigError("config: init_step_size must be positive");
  if (alpha_min <= 0.0f || alpha_max < alpha_min)
    throw ConfigError("config: bad step-size clamp range");
  if (is_curriculum()) {
    if (map_path.empty()) throw ConfigError("config: curriculum kinds need env.map");
    if (!std::filesystem::exists(map_path))
      throw ConfigError("config: map file not found: " + map_path);
    if (teacher.variant != StateVariant::PeQValues &&
        teacher.variant != StateVariant::PeOneHotPolicy &&
        teacher.variant != StateVariant::Parameters)
      throw ConfigError("config: state variant unsupported for tabular students");
  } else {
    if (kind == ExperimentKind::OptTransfer && !idx_images.empty()) {
      if (!std::filesystem::exists(idx_images))
        throw ConfigError("config: idx images not found: " + idx_images);
      if (!std::filesystem::exists(idx_labels))
        throw ConfigError("config: idx labels not found: " + idx_labels);
    }
    if (teacher.variant == StateVariant::PeQValues ||
        teacher.variant == StateVariant::PeOneHotPolicy)
      throw ConfigError("config: tabular state variants unsupported for classifier students");
  }
}

std::string RunConfig::snapshot() const {
  std::ostringstream o;
  o << "[run]\n";
  o << "kind = " << experiment_kind_name(kind) << "\n";
  o << "seeds = ";
  for (size_t i = 0; i < seeds.size(); ++i) o << (i ? "," : "") << seeds[i];
  o << "\n";
  o << "episodes = " << episodes << "\n";
  o << "init_episodes = " << init_episodes << "\n";
  o << "eval_students = " << eval_students << "\n";
  o << "eval_period = " << eval_period << "\n";
  o << "eval_prog_students = " << eval_prog_students << "\n";
  o << "eval_seed = " << eval_seed << "\n";
  o << "out_dir = " << out_dir << "\n";
  o << "time_limit_min = " << time_limit_min << "\n";
  o << "workers = " << workers << "\n";
  o << "[teacher]\n";
  o << "variant = " << variant_name(teacher.variant) << "\n";
  o << "mini_state_m = " << teacher.mini_state_m << "\n";
  o << "pooling = " << pooling_name(teacher.pooling) << "\n";
  o << "embed_dim = " << teacher.embed_dim << "\n";
  o << "encoder_hidden = " << teacher.encoder_hidden << "\n";
  o << "encoder_layers = " << teacher.encoder_layers << "\n";
  o << "qhead_hidden = " << teacher.qhead_hidden << "\n";
  o << "double_dqn = " << (teacher.double_dqn ? "true" : "false") << "\n";
  o << "lr = " << teacher.lr << "\n";
  o << "batch = " << teacher.batch << "\n";
  o << "sync_period = " << teacher.sync_period << "\n";
  o << "replay_capacity = " << replay_capacity << "\n";
  o << "eps_start = " << teacher.eps_start << "\n";
  o << "eps_decay = " << teacher.eps_decay << "\n";
  o << "eps_floor = " << teacher.eps_floor << "\n";
  o << "[reward]\n";
  o << "mode = " << reward_mode_name(reward.mode) << "\n";
  o << "shaping = " << shaping_name(reward.shaping) << "\n";
  o << "m_star = " << reward.m_star << "\n";
  o << "gamma = " << reward.gamma << "\n";
  o << "horizon = " << reward.horizon << "\n";
  o << "log_eps = " << reward.log_eps << "\n";
  o << "[student]\n";
  o << "substeps = " << substeps << "\n";
  o << "hidden_width = " << student_hidden_width << "\n";
  o << "hidden_layers = " << student_hidden_layers << "\n";
  o << "batch = " << student_batch << "\n";
  o << "base_optimizer = " << (base_optimizer == OptimizerKind::Sgd ? "sgd" : "adam") << "\n";
  o << "init_step_size = " << init_step_size << "\n";
  o << "alpha_min = " << alpha_min << "\n";
  o << "alpha_max = " << alpha_max << "\n";
  o << "tab_lr = " << tab_lr << "\n";
  o << "tab_gamma = " << tab_gamma << "\n";
  o << "tab_epsilon = " << tab_epsilon << "\n";
  o << "[env]\n";
  o << "map = " << map_path << "\n";
  o << "dim = " << task_dim << "\n";
  o << "n = " << task_n << "\n";
  o << "classes = " << task_classes << "\n";
  o << "label_net_width = " << label_net_width << "\n";
  o << "idx_images = " << idx_images << "\n";
  o << "idx_labels = " << idx_labels << "\n";
  o << "idx_cap = " << idx_cap << "\n";
  return o.str();
}

}  // namespace rteach
