#pragma once

#include <string>
#include <vector>

#include "rteach/common.hpp"

namespace rteach {

struct Cell {
  int r = 0;
  int c = 0;
  bool operator==(const Cell&) const = default;
};

enum class GridKind { Maze, FourRooms };

struct GridStep {
  int next_state = 0;
  double reward = 0.0;
  bool done = false;
};

// Deterministic gridworld loaded from the text map format
// (header `kind=... max_steps=...`, then `#`/`.`/`S`/`G` rows).
//
// Maze: state = cell index, actions {up, down, left, right},
// reward 0.99^steps on reaching the goal.
// Four rooms: state = (cell, heading), actions {turn-left, turn-right,
// forward}, reward 1 - 0.9*steps/max_steps on reaching the goal.
struct GridWorld {
  GridKind kind = GridKind::Maze;
  int width = 0;
  int height = 0;
  int max_steps = 40;
  std::vector<uint8_t> wall;  // height*width
  Cell goal;
  Cell target_start;

  static GridWorld parse(const std::string& text);
  static GridWorld load(const std::string& path);

  bool is_wall(int r, int c) const {
    if (r < 0 || r >= height || c < 0 || c >= width) return true;
    return wall[size_t(r) * width + c] != 0;
  }
  int cell_index(Cell cell) const { return cell.r * width + cell.c; }

  int n_actions() const { return kind == GridKind::Maze ? 4 : 3; }
  int n_states() const {
    return kind == GridKind::Maze ? width * height : width * height * 4;
  }
  // Initial student state for an episode launched from `start`.
  // Four-rooms episodes begin facing up (heading 0).
  int start_state(Cell start) const {
    return kind == GridKind::Maze ? cell_index(start) : cell_index(start) * 4;
  }
  Cell state_cell(int state) const {
    const int idx = kind == GridKind::Maze ? state : state / 4;
    return Cell{idx / width, idx % width};
  }
  int state_heading(int state) const { return kind == GridKind::Maze ? 0 : state % 4; }

  // step_count is the number of steps taken in the episode including this
  // one; the transition itself is a pure function of (state, action).
  GridStep step(int state, int action, int step_count) const;

  // Steps of the shortest goal-reaching trajectory from `start` (heading 0
  // for four rooms), or -1 when the goal is unreachable.
  int shortest_steps_from(Cell start) const;

  std::vector<Cell> free_cells() const;
  // Non-wall, non-goal cells from which the goal is reachable: the teacher's
  // start-state action set.
  std::vector<Cell> reachable_start_cells() const;
  // Free cells the goal cannot be reached from (blocked-off pockets).
  std::vector<Cell> unreachable_cells() const;
};

}  // namespace rteach
