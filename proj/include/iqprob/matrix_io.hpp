#pragma once

// Shared matrix file format:
//   {"dim": n, "entries": [[[re, im], ...], ...]}   row-major n x n
// Values are re-validated by the consuming type on load.

#include "iqprob/hermitian_core.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace iqprob {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_json(const Json& doc) {
  auto malformed = [](const std::string& what) { return Error(ErrorCode::MalformedInput, what); };
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries"))
    throw malformed("matrix document needs \"dim\" and \"entries\"");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    throw malformed("\"dim\" must be a positive integer");
  const auto n = static_cast<Index>(doc["dim"].get<long long>());
  const Json& rows = doc["entries"];
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
    throw Error(ErrorCode::NotSquare, "\"entries\" must have dim rows");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " must have dim entries");
    for (Index j = 0; j < n; ++j) {
      const Json& z = row[static_cast<std::size_t>(j)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw malformed("entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be [re, im]");
      m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  return m;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, "invalid JSON in " + path + ": " + e.what());
  }
}

inline Matrix load_matrix(const std::string& path) { return matrix_from_json(read_json_file(path)); }

inline void save_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

inline void save_matrix(const std::string& path, const Matrix& m) { save_json(path, matrix_to_json(m)); }

}  // namespace iqprob
