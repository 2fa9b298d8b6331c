// Run configuration files: flat `key = value` lines with optional [section]
// headers (a header only prefixes the keys below it, "optim.rho_begin").
// Unknown keys are rejected so typos fail loudly.
#pragma once

#include <string>

#include "qtrain/trainer.hpp"

namespace qtrain {

struct RunConfig {
    TrainingConfig training;
    std::string out_dir = "runs";
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// One `key = value` override, same key set as the file format.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace qtrain
