#pragma once

#include <cstdint>
#include <string>

#include "tdf/jump_model.hpp"
#include "tdf/strategy.hpp"

#include <json.hpp>

namespace tdf {

// KouParams <-> flat JSON {mu, sigma, lambda, p_up, eta1, eta2, r, dt_months}.
nlohmann::json kou_params_to_json(const KouParams& p);
KouParams kou_params_from_json(const nlohmann::json& j);
KouParams load_kou_params(const std::string& path);

// Scenario <-> {"T":..., "W0":..., "c":...} (+ optional rebalance_interval,
// contribution_times).
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

// Strategy <-> tagged union {"constant": p} / {"glide": [...]} /
// {"adaptive": "<policy path>"}.
nlohmann::json strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const nlohmann::json& j);

// FNV-1a 64-bit, hex string; provenance fingerprints for output files.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(const std::string& bytes);
std::string hash_file_hex(const std::string& path);

std::string read_text_file(const std::string& path); // raises io_error
void write_text_file(const std::string& path, const std::string& content);

} // namespace tdf
