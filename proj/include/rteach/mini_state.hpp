#pragma once

#include <string>
#include <vector>

#include "rteach/common.hpp"

namespace rteach {

// Teacher-facing views of the student's parameter state.
enum class StateVariant {
  Pe0,            // outputs only
  PeX,            // inputs + outputs
  PeY,            // one-hot targets + outputs
  Pe0Grad,        // outputs + output change after a virtual optimizer step
  PeXGrad,        // inputs + outputs + output change
  PeQValues,      // (state coords, Q(state, .)) for tabular students
  PeOneHotPolicy, // (state coords, one-hot greedy action)
  Parameters,     // flattened parameters, bypasses the set encoder
  Oblivious,      // scalars only: timestep fraction, step size, accuracy
};

const char* variant_name(StateVariant v);
StateVariant variant_from_name(const std::string& name);
bool variant_uses_records(StateVariant v);
bool variant_bypasses_encoder(StateVariant v);

// A set of per-input records plus a few appended scalars. Record order
// carries no meaning.
struct MiniState {
  StateVariant variant = StateVariant::Pe0;
  int record_width = 0;
  int count = 0;               // M
  std::vector<float> records;  // count x record_width, row-major
  std::vector<float> scalars;

  float* record(int i) { return records.data() + size_t(i) * record_width; }
  const float* record(int i) const { return records.data() + size_t(i) * record_width; }
};

struct MiniStateSpec {
  StateVariant variant = StateVariant::Pe0;
  int m = 32;  // records per mini-state
};

}  // namespace rteach
