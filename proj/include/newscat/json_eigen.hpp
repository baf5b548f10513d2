#pragma once

#include <json.hpp>

#include "newscat/error.hpp"
#include "newscat/features.hpp"

namespace newscat {

// {"rows": r, "cols": c, "data": [row-major values]}
template <typename Matrix>
nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

template <typename Matrix>
Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ValidationError("model file: matrix data has the wrong length");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  }
  return m;
}

inline nlohmann::json vector_to_json(const DenseVector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline DenseVector vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const DenseVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace newscat
