#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pipeframe/selection.hpp"

namespace pipeframe {

inline constexpr const char* kVersion = "0.2.0";

// Flat `key = value` config file: '#' comments, blank lines, no sections.
// Unknown keys, malformed values, and invariant violations all raise
// ParseError with the offending line.
SelectionConfig parse_config(const std::filesystem::path& path);

// Applies one key to the config; shared by the file parser and tests.
// `where` prefixes error messages.
void apply_config_key(SelectionConfig& config, const std::string& key, const std::string& value,
                      const std::string& where);

// Effective-config echo embedded in every output JSON.
nlohmann::ordered_json config_to_json(const SelectionConfig& config);

nlohmann::ordered_json pair_stats_to_json(const PairStats& stats);
nlohmann::ordered_json selection_result_to_json(const SelectionResult& result,
                                                const SelectionConfig& config);

} // namespace pipeframe
