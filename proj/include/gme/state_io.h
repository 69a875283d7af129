#pragma once

#include <string>

#include <json.hpp>

#include "gme/state.h"

namespace gme {

/// {"parties":[{"label":"A","dim":2},...],"amplitudes":[[re,im],...]}, last party fastest.
nlohmann::json state_to_json(const PureState& psi);
/// Validates shape and normalization (DomainError).
PureState state_from_json(const nlohmann::json& j);

PureState read_state_file(const std::string& path);
void write_state_file(const PureState& psi, const std::string& path);

}  // namespace gme
