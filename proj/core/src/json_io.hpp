#pragma once

#include <json.hpp>

#include "mwpx/solver.hpp"

namespace mwpx {

nlohmann::json config_to_json(const SolverConfig& config);
SolverConfig config_from_json(const nlohmann::json& j);

}  // namespace mwpx
