#pragma once

#include <string>
#include <string_view>

#include "arblobo/experiments.hpp"

namespace arblobo {

/// Parses a JSON experiment config. Missing keys take the defaults of the
/// named experiment; unknown keys and invalid values raise ConfigError with
/// the offending line. `source` names the input in messages.
ExperimentConfig parse_config(std::string_view json_text, std::string_view source = "<config>");

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path);

/// Fully resolved config as pretty-printed JSON; parse_config of the result
/// gives back an equal config.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace arblobo
