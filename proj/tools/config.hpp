#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dam/asymptotics.hpp"
#include "dam/costs.hpp"
#include "dam/model.hpp"

namespace damcli {

// Schema problems: missing keys, wrong types, invalid parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& w) : std::runtime_error("ConfigError: " + w) {}
};

struct RunConfig {
    nlohmann::json raw;
    std::optional<dam::DamModel> model;
    std::optional<dam::HeavyTrafficParams> heavy; // explicit heavy-traffic block
    dam::CostProfile costs;
    double j1 = 1, j2 = 1;
    std::string command;
    nlohmann::json options; // command block
    std::string output;

    // Heavy-traffic moments: the explicit block, or the model rescaled to rho1 = 1.
    dam::HeavyTrafficParams heavy_params() const;
    const dam::DamModel& require_model() const;

    double opt_number(const char* key, double dflt) const;
    std::string opt_string(const char* key, const std::string& dflt) const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& doc);

} // namespace damcli
