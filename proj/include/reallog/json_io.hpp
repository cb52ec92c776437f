#pragma once

#include <string>

#include <json.hpp>

#include "reallog/matrix_space_maps.hpp"

namespace reallog {

using Json = nlohmann::ordered_json;

/// {"n": n, "entries": [row-major n^2 reals]}
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

/// {"n": n, "big": [row-major n^4 reals]}
Json map_to_json(const MatrixSpaceMap& m);
MatrixSpaceMap map_from_json(const Json& j);

/// Serializes with every floating value printed to 17 significant digits;
/// non-finite values become null.
std::string dump_json(const Json& j, int indent = 2);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace reallog
