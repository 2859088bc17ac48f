#pragma once

#include "bhgs/radial_field.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace bhgs::io {

/// Columns r, w_1, ..., w_m with a header row; full double precision.
void write_field_csv(const std::filesystem::path& path, const RadialField& field);

/// Reads a profile written by write_field_csv. The r column must be the node set
/// of a collocation grid (n = rows, R_max = last r); the grid is rebuilt from it.
RadialField read_field_csv(const std::filesystem::path& path);

/// {"n", "r_max", "m", "values": [[w_1, ..., w_m], ...]}.
nlohmann::json field_to_json(const RadialField& field);
RadialField field_from_json(const nlohmann::json& j);

/// A flat subset of TOML: [table] and [table.sub] headers, key = value pairs with
/// strings, integers, floats, booleans and single-line arrays of those, # comments.
nlohmann::json parse_toml(const std::string& text);

/// Parses a .toml or .json file by extension (anything else is tried as JSON).
nlohmann::json load_config_file(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

}  // namespace bhgs::io
