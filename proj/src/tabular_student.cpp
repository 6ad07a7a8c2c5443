#include "rteach/tabular_student.hpp"

#include <cmath>

namespace rteach {

TabularQStudent::TabularQStudent(const GridWorld& e) : env(&e) {
  q.assign(size_t(e.n_states()) * e.n_actions(), 0.0);
  visited.assign(size_t(e.n_states()), 0);
}

void TabularQStudent::reset(uint64_t seed) {
  std::fill(q.begin(), q.end(), 0.0);
  std::fill(visited.begin(), visited.end(), 0);
  rng.reseed(seed);
  episodes_run = 0;
}

int TabularQStudent::greedy_action(int state) const {
  const int na = env->n_actions();
  const double* row = q.data() + size_t(state) * na;
  int best = 0;
  for (int a = 1; a < na; ++a)
    if (row[a] > row[best]) best = a;
  return best;
}

double TabularQStudent::max_q(int state) const {
  return q_at(state, greedy_action(state));
}

void TabularQStudent::q_update(int state, int action, double reward, int next_state, bool done) {
  const double bootstrap = done ? 0.0 : gamma * max_q(next_state);
  double& cur = q_at(state, action);
  cur += lr * (reward + bootstrap - cur);
}

void TabularQStudent::run_episodes(Cell start, int j) {
  if (env->is_wall(start.r, start.c)) throw ConfigError("run_episodes: start cell is a wall");
  const int na = env->n_actions();
  for (int ep = 0; ep < j; ++ep) {
    int state = env->start_state(start);
    visited[size_t(state) / (env->kind == GridKind::Maze ? 1 : 4)] = 1;
    for (int step = 1; step <= env->max_steps; ++step) {
      const int action =
          rng.uniform() < epsilon ? rng.uniform_int(na) : greedy_action(state);
      const GridStep gs = env->step(state, action, step);
      q_update(state, action, gs.reward, gs.next_state, gs.done);
      state = gs.next_state;
      visited[size_t(state) / (env->kind == GridKind::Maze ? 1 : 4)] = 1;
      if (gs.done) break;
    }
    ++episodes_run;
  }
}

double TabularQStudent::performance() const {
  int state = env->start_state(env->target_start);
  double ret = 0.0;
  for (int step = 1; step <= env->max_steps; ++step) {
    const GridStep gs = env->step(state, greedy_action(state), step);
    if (gs.done) {
      ret = gs.reward;
      break;
    }
    state = gs.next_state;
  }
  if (env->kind == GridKind::Maze) {
    // normalize so the shortest path from the target start scores 1.0
    const int opt = env->shortest_steps_from(env->target_start);
    if (opt > 0) ret /= std::pow(0.99, double(opt));
  }
  return ret < 0.0 ? 0.0 : (ret > 1.0 ? 1.0 : ret);
}

CurriculumProcess::CurriculumProcess(const GridWorld& env, int horizon)
    : env_(&env), student_(env), horizon_(horizon) {
  actions_.kind = TeacherActionSpace::Kind::StartState;
  actions_.cells = env.reachable_start_cells();
  if (actions_.cells.empty()) throw ConfigError("curriculum: no reachable start cells");
  sample_cells_ = env.free_cells();
  pending_start_ = env.target_start;
}

void CurriculumProcess::reset(uint64_t seed) {
  student_.reset(seed);
  pending_start_ = env_->target_start;
  teacher_steps_ = 0;
}

void CurriculumProcess::apply_action(int action) {
  pending_start_ = actions_.cells[size_t(action)];
}

void CurriculumProcess::advance(int k) {
  student_.run_episodes(pending_start_, k);
  ++teacher_steps_;
}

MiniState CurriculumProcess::mini_state(const MiniStateSpec& spec, Rng& rng) {
  MiniState ms;
  ms.variant = spec.variant;
  const int na = env_->n_actions();
  const bool four_rooms = env_->kind == GridKind::FourRooms;
  const int coord_w = four_rooms ? 3 : 2;

  switch (spec.variant) {
    case StateVariant::PeQValues:
    case StateVariant::PeOneHotPolicy: {
      if (spec.m < 1) throw ConfigError("mini_state: M must be >= 1");
      if (sample_cells_.empty()) throw ConfigError("mini_state: empty input source");
      ms.record_width = coord_w + na;
      ms.count = spec.m;
      ms.records.resize(size_t(spec.m) * ms.record_width);
      for (int i = 0; i < spec.m; ++i) {
        const Cell cell = sample_cells_[size_t(rng.uniform_int(int(sample_cells_.size())))];
        const int heading = four_rooms ? rng.uniform_int(4) : 0;
        const int state = four_rooms ? env_->cell_index(cell) * 4 + heading
                                     : env_->cell_index(cell);
        float* rec = ms.record(i);
        rec[0] = float(cell.c) / float(env_->width - 1);
        rec[1] = float(cell.r) / float(env_->height - 1);
        if (four_rooms) rec[2] = float(heading) / 3.0f;
        if (spec.variant == StateVariant::PeQValues) {
          for (int a = 0; a < na; ++a) rec[coord_w + a] = float(student_.q_at(state, a));
        } else {
          for (int a = 0; a < na; ++a) rec[coord_w + a] = 0.0f;
          rec[coord_w + student_.greedy_action(state)] = 1.0f;
        }
      }
      break;
    }
    case StateVariant::Parameters: {
      ms.record_width = int(student_.q.size());
      ms.count = 1;
      ms.records.resize(student_.q.size());
      for (size_t i = 0; i < student_.q.size(); ++i) ms.records[i] = float(student_.q[i]);
      break;
    }
    default:
      throw ConfigError(std::string("mini_state: variant ") + variant_name(spec.variant) +
                        " not supported by the tabular student");
  }
  // start-state action space: no appended scalars
  return ms;
}

}  // namespace rteach
