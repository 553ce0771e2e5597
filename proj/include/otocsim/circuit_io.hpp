// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "otocsim/ensemble.hpp"

namespace otocsim {

inline constexpr int kCircuitFormatVersion = 1;

nlohmann::json circuit_to_json(const Circuit& circuit);
/// Throws ParseError describing the offending field.
Circuit circuit_from_json(const nlohmann::json& doc);

std::string dump_circuit(const Circuit& circuit);
/// Throws ParseError; syntax errors name the byte offset.
Circuit parse_circuit(const std::string& text);

void save_circuit(const Circuit& circuit, const std::filesystem::path& path);
Circuit load_circuit(const std::filesystem::path& path);

nlohmann::json ensemble_spec_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_spec_from_json(const nlohmann::json& doc);

}  // namespace otocsim
