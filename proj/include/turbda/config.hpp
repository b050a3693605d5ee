#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "turbda/osse.hpp"

namespace turbda {

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// FNV-1a 64 over the canonical (sorted-key) dump, as 16 hex digits
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace turbda
