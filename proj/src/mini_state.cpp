#include "rteach/mini_state.hpp"

namespace rteach {

const char* variant_name(StateVariant v) {
  switch (v) {
    case StateVariant::Pe0: return "pe-0";
    case StateVariant::PeX: return "pe-x";
    case StateVariant::PeY: return "pe-y";
    case StateVariant::Pe0Grad: return "pe-0-grad";
    case StateVariant::PeXGrad: return "pe-x-grad";
    case StateVariant::PeQValues: return "pe-qvalues";
    case StateVariant::PeOneHotPolicy: return "pe-onehot-policy";
    case StateVariant::Parameters: return "parameters";
    case StateVariant::Oblivious: return "oblivious";
  }
  return "?";
}

StateVariant variant_from_name(const std::string& name) {
  for (StateVariant v :
       {StateVariant::Pe0, StateVariant::PeX, StateVariant::PeY, StateVariant::Pe0Grad,
        StateVariant::PeXGrad, StateVariant::PeQValues, StateVariant::PeOneHotPolicy,
        StateVariant::Parameters, StateVariant::Oblivious}) {
    if (name == variant_name(v)) return v;
  }
  throw ConfigError("unknown state variant '" + name + "'");
}

bool variant_uses_records(StateVariant v) {
  return v != StateVariant::Parameters && v != StateVariant::Oblivious;
}

bool variant_bypasses_encoder(StateVariant v) {
  return v == StateVariant::Parameters || v == StateVariant::Oblivious;
}

}  // namespace rteach
