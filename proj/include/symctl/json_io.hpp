#pragma once

#include <string>

#include <json.hpp>

#include "symctl/tensor_core.hpp"

namespace symctl::io {

using json = nlohmann::json;

// {"dim": n, "entries": [[[re, im], ...], ...]} row-major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// Shortest round-trip formatting of doubles.
std::string dump(const json& j, int indent = -1);

}  // namespace symctl::io
