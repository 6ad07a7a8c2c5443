#pragma once

#include <memory>
#include <vector>

#include "rteach/gridworld.hpp"
#include "rteach/mini_state.hpp"
#include "rteach/rng.hpp"

namespace rteach {

// What the teacher's actions control.
struct TeacherActionSpace {
  enum class Kind { StartState, StepSizeRelative } kind = Kind::StepSizeRelative;
  std::vector<Cell> cells;                       // start-state actions
  std::vector<float> factors{0.5f, 1.0f, 2.0f};  // relative step-size actions

  int size() const {
    return kind == Kind::StartState ? int(cells.size()) : int(factors.size());
  }
};

// The student learning process: resettable, steppable, queryable for its
// performance measure and for mini-state views of its parameters.
class StudentProcess {
 public:
  virtual ~StudentProcess() = default;

  // Fresh parameters (and a fresh task where the environment is sampled
  // per episode). Resets the teacher-step counter.
  virtual void reset(uint64_t seed) = 0;

  // Applies one teacher action (sets the next start state / rescales the
  // step size with clamping).
  virtual void apply_action(int action) = 0;

  // Runs k base time steps (student episodes for curricula, gradient steps
  // for optimizer control) and advances the teacher-step counter by one.
  virtual void advance(int k) = 0;

  // Current performance measure, normalized to [0,1]. Pure in the process
  // state; implementations may cache it between parameter updates.
  virtual double performance() = 0;

  virtual MiniState mini_state(const MiniStateSpec& spec, Rng& rng) = 0;

  virtual const TeacherActionSpace& action_space() const = 0;

  // False when the learning algorithm keeps hidden state (e.g. Adam), in
  // which case grad-augmented mini-states recover the Markov property.
  virtual bool is_param_markov() const = 0;

  virtual int teacher_steps() const = 0;
  virtual long base_steps() const = 0;
};

}  // namespace rteach
