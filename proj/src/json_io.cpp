#include "symctl/json_io.hpp"

#include <fstream>
#include <sstream>

namespace symctl::io {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw PreconditionError("complex entry must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw PreconditionError("matrix JSON needs \"dim\" and \"entries\"");
  const auto dim = j.at("dim").get<long>();
  const auto& rows = j.at("entries");
  if (dim <= 0 || !rows.is_array() || static_cast<long>(rows.size()) != dim)
    throw PreconditionError("matrix JSON: entries must have dim rows");
  Matrix m(dim, dim);
  for (long r = 0; r < dim; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<long>(row.size()) != dim)
      throw PreconditionError("matrix JSON: row " + std::to_string(r) + " has wrong length");
    for (long c = 0; c < dim; ++c) m(r, c) = complex_from_json(row[c]);
  }
  if (!m.allFinite()) throw PreconditionError("matrix JSON: non-finite entry");
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw PreconditionError("amplitude list must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump(j, 2) << '\n';
}

std::string dump(const json& j, int indent) { return j.dump(indent); }

}  // namespace symctl::io
