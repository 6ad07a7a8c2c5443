#include "rteach/gridworld.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace rteach {

namespace {

// maze actions: 0 up, 1 down, 2 left, 3 right
constexpr int kDr[4] = {-1, 1, 0, 0};
constexpr int kDc[4] = {0, 0, -1, 1};
// four-rooms headings: 0 up, 1 right, 2 down, 3 left
constexpr int kHeadDr[4] = {-1, 0, 1, 0};
constexpr int kHeadDc[4] = {0, 1, 0, -1};

}  // namespace

GridWorld GridWorld::parse(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw IoError("grid map: empty file");

  GridWorld g;
  bool kind_seen = false;
  std::istringstream hs(header);
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw IoError("grid map: bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "kind") {
      if (val == "maze") {
        g.kind = GridKind::Maze;
      } else if (val == "four-rooms") {
        g.kind = GridKind::FourRooms;
      } else {
        throw IoError("grid map: unknown kind '" + val + "'");
      }
      kind_seen = true;
    } else if (key == "max_steps") {
      g.max_steps = std::stoi(val);
      if (g.max_steps < 1) throw IoError("grid map: max_steps must be positive");
    } else {
      throw IoError("grid map: unknown header key '" + key + "'");
    }
  }
  if (!kind_seen) throw IoError("grid map: header must declare kind");

  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw IoError("grid map: no rows");
  g.height = int(rows.size());
  g.width = int(rows[0].size());
  g.wall.assign(size_t(g.height) * g.width, 0);
  bool has_start = false, has_goal = false;
  for (int r = 0; r < g.height; ++r) {
    if (int(rows[size_t(r)].size()) != g.width) throw IoError("grid map: ragged rows");
    for (int c = 0; c < g.width; ++c) {
      switch (rows[size_t(r)][size_t(c)]) {
        case '#':
          g.wall[size_t(r) * g.width + c] = 1;
          break;
        case '.':
          break;
        case 'S':
          g.target_start = {r, c};
          has_start = true;
          break;
        case 'G':
          g.goal = {r, c};
          has_goal = true;
          break;
        default:
          throw IoError("grid map: unknown cell character");
      }
    }
  }
  if (!has_start || !has_goal) throw IoError("grid map: S and G cells required");
  return g;
}

GridWorld GridWorld::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("grid map: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

GridStep GridWorld::step(int state, int action, int step_count) const {
  if (action < 0 || action >= n_actions()) throw ConfigError("grid step: invalid action index");
  Cell cell = state_cell(state);
  int heading = state_heading(state);
  if (kind == GridKind::Maze) {
    const int nr = cell.r + kDr[action], nc = cell.c + kDc[action];
    if (!is_wall(nr, nc)) cell = {nr, nc};
  } else {
    if (action == 0) {
      heading = (heading + 3) % 4;
    } else if (action == 1) {
      heading = (heading + 1) % 4;
    } else {
      const int nr = cell.r + kHeadDr[heading], nc = cell.c + kHeadDc[heading];
      if (!is_wall(nr, nc)) cell = {nr, nc};
    }
  }
  GridStep out;
  out.next_state = kind == GridKind::Maze ? cell_index(cell) : cell_index(cell) * 4 + heading;
  if (cell == goal) {
    out.done = true;
    out.reward = kind == GridKind::Maze
                     ? std::pow(0.99, double(step_count))
                     : 1.0 - 0.9 * double(step_count) / double(max_steps);
  } else if (step_count >= max_steps) {
    out.done = true;
    out.reward = 0.0;
  }
  return out;
}

int GridWorld::shortest_steps_from(Cell start) const {
  if (is_wall(start.r, start.c)) return -1;
  std::vector<int> dist(size_t(n_states()), -1);
  std::deque<int> queue;
  const int s0 = start_state(start);
  dist[size_t(s0)] = 0;
  queue.push_back(s0);
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    if (state_cell(s) == goal) return dist[size_t(s)];
    for (int a = 0; a < n_actions(); ++a) {
      // step_count irrelevant for connectivity
      const int ns = step(s, a, 1).next_state;
      if (dist[size_t(ns)] < 0) {
        dist[size_t(ns)] = dist[size_t(s)] + 1;
        queue.push_back(ns);
      }
    }
  }
  return -1;
}

std::vector<Cell> GridWorld::free_cells() const {
  std::vector<Cell> out;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (!is_wall(r, c)) out.push_back({r, c});
  return out;
}

std::vector<Cell> GridWorld::reachable_start_cells() const {
  std::vector<Cell> out;
  for (const Cell& cell : free_cells())
    if (!(cell == goal) && shortest_steps_from(cell) >= 0) out.push_back(cell);
  return out;
}

std::vector<Cell> GridWorld::unreachable_cells() const {
  std::vector<Cell> out;
  for (const Cell& cell : free_cells())
    if (!(cell == goal) && shortest_steps_from(cell) < 0) out.push_back(cell);
  return out;
}

}  // namespace rteach
