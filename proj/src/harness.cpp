#include "rteach/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "rteach/classifier_student.hpp"
#include "rteach/csv.hpp"
#include "rteach/tabular_student.hpp"
#include "rteach/tasks.hpp"

namespace fs = std::filesystem;

namespace rteach {

namespace {

std::shared_ptr<const ClassificationTask> load_idx_task(const RunConfig& cfg) {
  auto ds = load_idx(cfg.idx_images, cfg.idx_labels, cfg.idx_cap);
  auto task = std::make_shared<ClassificationTask>();
  task->inputs = std::move(ds.images);
  task->labels = std::move(ds.labels);
  task->n_classes = cfg.task_classes;
  return task;
}

std::unique_ptr<StudentProcess> build_process_impl(const RunConfig& cfg,
                                                   std::shared_ptr<const GridWorld>& env_out,
                                                   bool for_eval) {
  if (cfg.is_curriculum()) {
    if (!env_out) env_out = std::make_shared<const GridWorld>(GridWorld::load(cfg.map_path));
    auto p = std::make_unique<CurriculumProcess>(*env_out, cfg.reward.horizon);
    p->student().lr = cfg.tab_lr;
    p->student().gamma = cfg.tab_gamma;
    p->student().epsilon = cfg.tab_epsilon;
    return p;
  }

  std::vector<int> hidden(size_t(cfg.student_hidden_layers), cfg.student_hidden_width);
  OptControlProcess::TaskFactory factory;
  if (cfg.kind == ExperimentKind::OptTransfer) {
    if (for_eval && !cfg.idx_images.empty()) {
      auto task = load_idx_task(cfg);
      factory = [task](uint64_t) { return task; };
    } else {
      const RunConfig c = cfg;
      factory = [c](uint64_t seed) {
        return std::make_shared<const ClassificationTask>(
            generate_nn_task(seed, c.task_dim, c.task_n, c.student_hidden_layers,
                             c.label_net_width, c.task_classes));
      };
    }
  } else {
    const int dim = cfg.task_dim, n = cfg.task_n;
    factory = [dim, n](uint64_t seed) {
      return std::make_shared<const ClassificationTask>(generate_cluster_task(seed, dim, n));
    };
  }
  return std::make_unique<OptControlProcess>(std::move(factory), hidden, cfg.base_optimizer,
                                             cfg.init_step_size, cfg.student_batch,
                                             cfg.reward.horizon, cfg.alpha_min, cfg.alpha_max);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct StudentEvalOutcome {
  int steps = 0;
  long substeps = 0;
  bool reached = false;
  std::vector<double> curve;
  std::vector<int> actions;
  std::vector<float> step_sizes;  // step-size control only
};

// One fresh student driven by a frozen policy for up to `horizon` teacher
// steps, stopping at the performance threshold.
StudentEvalOutcome drive_student(StudentProcess& process, const PolicyFn& policy,
                                 const RunConfig& cfg, uint64_t student_seed) {
  StudentEvalOutcome out;
  process.reset(student_seed);
  Rng ms_rng(derive_seed(student_seed, 0xE7A1));
  Rng policy_rng(derive_seed(student_seed, 0xE7A2));
  const MiniStateSpec spec{cfg.teacher.variant, cfg.teacher.mini_state_m};
  const int horizon = cfg.reward.horizon;
  auto* opt = dynamic_cast<OptControlProcess*>(&process);
  for (int step = 1; step <= horizon; ++step) {
    const MiniState ms = process.mini_state(spec, ms_rng);
    const int action = policy(ms, policy_rng);
    process.apply_action(action);
    process.advance(cfg.substeps);
    const double m = process.performance();
    out.curve.push_back(m);
    out.actions.push_back(action);
    if (opt) out.step_sizes.push_back(opt->step_size());
    out.steps = step;
    out.substeps = process.base_steps();
    if (cfg.reward.mode == RewardMode::TimeToThreshold && m >= cfg.reward.m_star) {
      out.reached = true;
      break;
    }
  }
  if (!out.reached) {
    out.steps = horizon + 1;
    out.substeps = long(horizon + 1) * cfg.substeps;
  }
  return out;
}

}  // namespace

std::unique_ptr<StudentProcess> build_process(const RunConfig& cfg,
                                              std::shared_ptr<const GridWorld>& env_out) {
  return build_process_impl(cfg, env_out, false);
}

PolicyFn greedy_policy(DqnTeacher& teacher) {
  return [&teacher](const MiniState& ms, Rng&) { return teacher.greedy_action(ms); };
}

PolicyFn random_policy(int n_actions) {
  return [n_actions](const MiniState&, Rng& rng) { return rng.uniform_int(n_actions); };
}

PolicyFn scratch_policy(const RunConfig& cfg, const StudentProcess& process) {
  if (cfg.is_curriculum()) {
    const auto& cells = process.action_space().cells;
    const auto env_start = dynamic_cast<const CurriculumProcess&>(process).student().env->target_start;
    for (size_t i = 0; i < cells.size(); ++i)
      if (cells[i] == env_start) return [i](const MiniState&, Rng&) { return int(i); };
    throw ConfigError("scratch baseline: target start is not a reachable action");
  }
  const auto& factors = process.action_space().factors;
  for (size_t i = 0; i < factors.size(); ++i)
    if (factors[i] == 1.0f) return [i](const MiniState&, Rng&) { return int(i); };
  throw ConfigError("scratch baseline: no identity step-size factor");
}

int EvalResult::n_reached() const {
  int n = 0;
  for (uint8_t r : reached) n += r ? 1 : 0;
  return n;
}

double EvalResult::median_steps() const {
  std::vector<double> v(steps_to_threshold.begin(), steps_to_threshold.end());
  return median_of(std::move(v));
}

double EvalResult::median_substeps() const {
  std::vector<double> v(substeps_to_threshold.begin(), substeps_to_threshold.end());
  return median_of(std::move(v));
}

EvalResult evaluate_policy(const PolicyFn& policy, const RunConfig& cfg, int n_students,
                           const std::string& out_prefix) {
  std::shared_ptr<const GridWorld> env;
  auto process = build_process_impl(cfg, env, true);

  EvalResult res;
  if (cfg.is_curriculum() && env)
    res.heatmaps.assign(3, std::vector<long>(size_t(env->height) * env->width, 0));

  std::unique_ptr<CsvWriter> curves;
  if (!out_prefix.empty()) {
    fs::create_directories(fs::path(out_prefix).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(out_prefix).parent_path());
    curves = std::make_unique<CsvWriter>(out_prefix + "curves.csv",
                                         "student,step,m,action,step_size");
  }

  for (int i = 0; i < n_students; ++i) {
    const uint64_t seed = derive_seed(cfg.eval_seed, 1000 + uint64_t(i));
    StudentEvalOutcome out = drive_student(*process, policy, cfg, seed);
    res.steps_to_threshold.push_back(out.steps);
    res.substeps_to_threshold.push_back(out.substeps);
    res.reached.push_back(out.reached ? 1 : 0);
    if (curves) {
      for (size_t s = 0; s < out.curve.size(); ++s)
        curves->row(i, int(s + 1), out.curve[s], out.actions[s],
                    s < out.step_sizes.size() ? fmt(out.step_sizes[s]) : std::string("-"));
    }
    if (!res.heatmaps.empty()) {
      const auto& cells = process->action_space().cells;
      const int taken = int(out.actions.size());
      for (int s = 0; s < taken; ++s) {
        const int phase = std::min(2, (s * 3) / std::max(1, taken));
        const Cell cell = cells[size_t(out.actions[size_t(s)])];
        res.heatmaps[size_t(phase)][size_t(cell.r) * env->width + cell.c]++;
      }
    }
    res.curves.push_back(std::move(out.curve));
  }

  if (!out_prefix.empty()) {
    CsvWriter summary(out_prefix + "summary.csv", "student,steps,substeps,reached");
    for (int i = 0; i < n_students; ++i)
      summary.row(i, res.steps_to_threshold[size_t(i)], res.substeps_to_threshold[size_t(i)],
                  res.reached[size_t(i)] != 0);
    for (size_t p = 0; p < res.heatmaps.size(); ++p) {
      std::ofstream hm(out_prefix + "heatmap_phase" + std::to_string(p) + ".csv",
                       std::ios::binary);
      for (int r = 0; r < env->height; ++r) {
        for (int c = 0; c < env->width; ++c)
          hm << (c ? "," : "") << res.heatmaps[p][size_t(r) * env->width + c];
        hm << "\n";
      }
    }
  }
  return res;
}

EvalResult evaluate_checkpoint(const std::string& checkpoint_path, const RunConfig& cfg,
                               int n_students, const std::string& out_prefix) {
  DqnTeacher teacher = DqnTeacher::load(checkpoint_path);
  if (teacher.config().variant != cfg.teacher.variant)
    throw ConfigError("checkpoint/config mismatch: state variant differs");
  if (teacher.config().mini_state_m != cfg.teacher.mini_state_m)
    throw ConfigError("checkpoint/config mismatch: mini-state size differs");
  std::shared_ptr<const GridWorld> env;
  auto probe_process = build_process_impl(cfg, env, true);
  if (teacher.n_actions() != probe_process->action_space().size())
    throw ConfigError("checkpoint/config mismatch: action space size differs");
  return evaluate_policy(greedy_policy(teacher), cfg, n_students, out_prefix);
}

BaselineKind baseline_kind_from_name(const std::string& name) {
  if (name == "constant-step-sweep") return BaselineKind::ConstantStepSweep;
  if (name == "random-teacher") return BaselineKind::RandomTeacher;
  if (name == "scratch") return BaselineKind::Scratch;
  throw ConfigError("unknown baseline kind '" + name + "'");
}

BaselineResult run_baseline(BaselineKind kind, const RunConfig& cfg,
                            const std::string& out_prefix) {
  BaselineResult res;
  if (kind == BaselineKind::Scratch) {
    std::shared_ptr<const GridWorld> env;
    auto process = build_process_impl(cfg, env, true);
    res.eval = evaluate_policy(scratch_policy(cfg, *process), cfg, cfg.eval_students,
                               out_prefix);
    return res;
  }
  if (kind == BaselineKind::RandomTeacher) {
    std::shared_ptr<const GridWorld> env;
    auto process = build_process_impl(cfg, env, true);
    res.eval = evaluate_policy(random_policy(process->action_space().size()), cfg,
                               cfg.eval_students, out_prefix);
    return res;
  }

  if (cfg.is_curriculum())
    throw ConfigError("constant-step-sweep applies to step-size experiments only");
  double best_median = 0.0;
  std::unique_ptr<CsvWriter> sweep;
  if (!out_prefix.empty())
    sweep = std::make_unique<CsvWriter>(out_prefix + "sweep.csv",
                                        "alpha,median_substeps,n_reached");
  for (int k = 1; k <= 12; ++k) {
    const float alpha = std::ldexp(1.0f, -k);
    RunConfig arm = cfg;
    arm.init_step_size = alpha;
    std::shared_ptr<const GridWorld> env;
    auto process = build_process_impl(arm, env, true);
    EvalResult ev = evaluate_policy(scratch_policy(arm, *process), arm, arm.eval_students, "");
    const double med = ev.median_substeps();
    res.sweep_alphas.push_back(alpha);
    res.sweep_median_substeps.push_back(med);
    if (sweep) sweep->row(alpha, med, ev.n_reached());
    if (res.best_alpha == 0.0f || med < best_median) {
      best_median = med;
      res.best_alpha = alpha;
      res.eval = std::move(ev);
    }
  }
  if (!out_prefix.empty()) {
    RunConfig best = cfg;
    best.init_step_size = res.best_alpha;
    std::shared_ptr<const GridWorld> env;
    auto process = build_process_impl(best, env, true);
    evaluate_policy(scratch_policy(best, *process), best, best.eval_students,
                    out_prefix + "best_");
  }
  return res;
}

TrainResult run_teacher_training(const RunConfig& cfg, uint64_t seed) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  const auto t_start = std::chrono::steady_clock::now();

  std::shared_ptr<const GridWorld> env;
  auto process = build_process(cfg, env);
  const MiniStateSpec spec{cfg.teacher.variant, cfg.teacher.mini_state_m};

  // probe record/scalar widths for the teacher nets
  Rng probe_rng(derive_seed(seed, 0xBEEF));
  process->reset(derive_seed(seed, 0xBEEF));
  const MiniState probe = process->mini_state(spec, probe_rng);

  Rng teacher_rng(derive_seed(seed, 1));
  TrainResult result;
  result.seed = seed;
  result.teacher = std::make_unique<DqnTeacher>(cfg.teacher, probe.record_width,
                                                int(probe.scalars.size()),
                                                process->action_space().size(), teacher_rng);
  DqnTeacher& teacher = *result.teacher;

  ReplayBuffer replay(cfg.replay_capacity);
  Rng explore_rng(derive_seed(seed, 2));
  Rng ms_rng(derive_seed(seed, 3));
  Rng replay_rng(derive_seed(seed, 4));

  // progress evaluation uses its own process and streams
  std::shared_ptr<const GridWorld> eval_env = env;
  auto eval_process = build_process(cfg, eval_env);

  const std::string tag = "_seed" + std::to_string(seed);
  CsvWriter transitions(cfg.out_dir + "/transitions" + tag + ".csv",
                        "phase,episode,step,action,reward,m,terminal,truncated");
  CsvWriter evalprog(cfg.out_dir + "/evalprog" + tag + ".csv", "episode,n_success");
  CsvWriter timing(cfg.out_dir + "/timing" + tag + ".csv", "phase,episode,wall_ms");

  result.first_success_episode = cfg.episodes + 1;
  const int total_episodes = cfg.init_episodes + cfg.episodes;
  bool found_success = false;

  for (int ep = 0; ep < total_episodes; ++ep) {
    const bool init_phase = ep < cfg.init_episodes;
    const int ep_in_phase = init_phase ? ep + 1 : ep - cfg.init_episodes + 1;
    const char* phase = init_phase ? "init" : "train";
    const double eps =
        init_phase ? 1.0 : teacher.epsilon_for_episode(ep_in_phase - 1);

    process->reset(derive_seed(seed, 0x100000u + uint64_t(ep)));
    auto ms = std::make_shared<const MiniState>(process->mini_state(spec, ms_rng));
    double m = process->performance();

    EpisodeRow row;
    row.phase = phase;
    row.episode = ep_in_phase;
    row.epsilon = eps;
    double loss_sum = 0.0;
    int loss_count = 0;

    for (int step = 1; step <= cfg.reward.horizon; ++step) {
      const int action = teacher.select_action(*ms, eps, explore_rng);
      TeacherTransition tr =
          teaching_step(*process, ms, m, action, cfg.substeps, cfg.reward, step, spec, ms_rng);
      transitions.row(phase, ep_in_phase, step, action, tr.reward, tr.m_new, tr.terminal,
                      tr.truncated);
      m = tr.m_new;
      ms = tr.next_state;
      const bool done = tr.terminal || tr.truncated;
      row.steps = step;
      row.reached = tr.terminal;
      replay.push(std::move(tr));
      if (!init_phase && replay.size() >= size_t(cfg.teacher.batch)) {
        loss_sum += teacher.train_step(replay, replay_rng);
        ++loss_count;
      }
      if (done) break;
    }
    row.substeps = long(row.steps) * cfg.substeps;
    row.terminal_m = m;
    row.mean_loss = loss_count ? loss_sum / loss_count : 0.0;
    result.rows.push_back(row);

    if (!init_phase && cfg.eval_period > 0 &&
        (ep_in_phase % cfg.eval_period == 0 || ep_in_phase == 1)) {
      int n_success = 0;
      for (int i = 0; i < cfg.eval_prog_students; ++i) {
        const uint64_t es = derive_seed(cfg.eval_seed, 500 + uint64_t(i));
        const StudentEvalOutcome out =
            drive_student(*eval_process, greedy_policy(teacher), cfg, es);
        n_success += out.reached ? 1 : 0;
      }
      evalprog.row(ep_in_phase, n_success);
      if (!found_success && n_success == cfg.eval_prog_students) {
        result.first_success_episode = ep_in_phase;
        found_success = true;
      }
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    timing.row(phase, ep_in_phase, wall_ms);
    if (wall_ms > cfg.time_limit_min * 60000.0) {
      result.time_truncated = true;
      break;
    }
  }

  CsvWriter train(cfg.out_dir + "/train" + tag + ".csv",
                  "phase,episode,steps,substeps,terminal_m,reached,epsilon,mean_loss");
  for (const EpisodeRow& r : result.rows)
    train.row(r.phase, r.episode, r.steps, r.substeps, r.terminal_m, r.reached, r.epsilon,
              r.mean_loss);

  result.checkpoint_path = cfg.out_dir + "/checkpoint" + tag + ".ckpt";
  teacher.save(result.checkpoint_path);

  std::ofstream status(cfg.out_dir + "/status" + tag + ".txt", std::ios::binary);
  status << (result.time_truncated ? "time-truncated" : "completed") << "\n";
  return result;
}

std::vector<TrainResult> run_training_over_seeds(const RunConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream snap(cfg.out_dir + "/config_resolved.txt", std::ios::binary);
    snap << cfg.snapshot();
  }

  const int n = int(cfg.seeds.size());
  std::vector<TrainResult> results(size_t(n));
  int workers = cfg.workers > 0 ? cfg.workers : int(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n));

  if (workers == 1) {
    for (int i = 0; i < n; ++i) results[size_t(i)] = run_teacher_training(cfg, cfg.seeds[size_t(i)]);
    return results;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          results[size_t(i)] = run_teacher_training(cfg, cfg.seeds[size_t(i)]);
      } catch (...) {
        errors[size_t(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace rteach
