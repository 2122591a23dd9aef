#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "wgeom/connection.hpp"
#include "wgeom/density.hpp"
#include "wgeom/ot_oracle.hpp"
#include "wgeom/path.hpp"
#include "wgeom/tangent.hpp"

namespace wgeom::io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

// Shortest decimal form that round-trips; used for every CSV number.
std::string format_number(double v);

// Hex FNV-1a of a byte string.
std::string fnv1a_hex(const std::string& bytes);

// Writes text, creating parent directories. Throws ConfigError on I/O failure.
void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

// Pretty-printed with sorted keys and a trailing newline.
std::string dump(const json& j);

// node,value
std::string density_csv(const Density& mu);
// Reads node,value rows (header optional); the row count is the grid size.
Density read_density_csv(const std::filesystem::path& file);

json density_json(const Density& mu);
Density density_from_json(const json& j);

json tangent_json(const TangentVector& v);
// Needs the base density; throws ConfigError when N or the ordering do not match.
TangentVector tangent_from_json(const json& j, const Density& base);

// Header (N, ordering, base density hash) followed by gamma[k][i][j].
json christoffel_json(const ChristoffelTensor& gamma);

// time,node,density,potential for every sample and node.
std::string path_csv(const GeodesicPath& path);
json path_manifest(const GeodesicPath& path, const std::string& csv_name);

// Dense matrix, one CSV row per source atom.
std::string coupling_csv(const Coupling& pi);

std::string hash_hex(std::uint64_t h);

}  // namespace wgeom::io
