#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "halfreg/degree_matrix.hpp"
#include "halfreg/realization.hpp"

namespace halfreg::io {

using json = nlohmann::json;

// Degree matrix: {"n":int,"m":int,"k":int,"d":[k ints],"f":[[m ints] x k]}
json to_json(const DegreeMatrix& matrix);
DegreeMatrix degree_matrix_from_json(const json& doc);

// Realization: {"n":..,"m":..,"k":..,"matrix":[[m ints] x n]}
json to_json(const ColoredRealization& r);
ColoredRealization realization_from_json(const json& doc);

// CSV: n lines of m comma-separated color ids. The color count is not part
// of the format, so the reader takes it from the caller.
std::string to_csv(const ColoredRealization& r);
ColoredRealization realization_from_csv(std::string_view text, int colors);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

DegreeMatrix parse_matrix_file(const std::filesystem::path& path);
json parse_json_file(const std::filesystem::path& path);

}  // namespace halfreg::io
