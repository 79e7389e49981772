#pragma once

#include <string>

#include <json.hpp>

#include "islm/econ_model.hpp"
#include "islm/phase_plane.hpp"

namespace islm {

// Strict parse: unknown or missing fields are rejected with a descriptive
// std::invalid_argument. The result is validated before being returned.
ModelConfig config_from_json(const nlohmann::json& j);
ModelConfig load_config(const std::string& path);

nlohmann::json config_to_json(const ModelConfig& cfg);

nlohmann::json report_to_json(const ConditionReport& rep);
nlohmann::json equilibria_to_json(const std::vector<Equilibrium>& eqs);

} // namespace islm
