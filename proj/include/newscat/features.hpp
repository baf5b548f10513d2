#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace newscat {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseVector = Eigen::VectorXd;

// Indices strictly increasing and < dim; values finite and positive.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dim = 0;

  bool empty() const { return indices.empty(); }
  bool operator==(const SparseVector&) const = default;
};

struct SparseFeatures {
  std::vector<SparseVector> rows;
  std::size_t dim = 0;
};

// Token ids into an embedding table, one sequence per document.
struct SequenceFeatures {
  std::vector<std::vector<std::uint32_t>> sequences;
};

enum class FeatureContract { sparse, dense, token_sequence };

using Features = std::variant<SparseFeatures, DenseMatrix, SequenceFeatures>;

FeatureContract contract_of(const Features& features);
std::size_t num_rows(const Features& features);
std::string_view to_string(FeatureContract contract);
FeatureContract feature_contract_from_string(std::string_view name);

DenseMatrix densify(const SparseFeatures& features);

// Rows of `features` in the given order.
Features select_rows(const Features& features, std::span<const std::size_t> rows);

// Per-feature z-scoring fitted on training rows. Constant columns get scale 1.
class Standardizer {
 public:
  Standardizer() = default;
  static Standardizer fit(const DenseMatrix& x);
  DenseMatrix transform(const DenseMatrix& x) const;

  const DenseVector& mean() const { return mean_; }
  const DenseVector& scale() const { return scale_; }

 private:
  DenseVector mean_;
  DenseVector scale_;
};

// Throws ValidationError on NaN or infinity.
void check_finite(const Features& features, std::string_view what);

}  // namespace newscat
