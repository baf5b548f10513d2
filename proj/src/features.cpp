#include "newscat/features.hpp"

#include <cmath>

#include <fmt/format.h>

#include "newscat/error.hpp"

namespace newscat {

FeatureContract contract_of(const Features& features) {
  switch (features.index()) {
    case 0:
      return FeatureContract::sparse;
    case 1:
      return FeatureContract::dense;
    default:
      return FeatureContract::token_sequence;
  }
}

std::size_t num_rows(const Features& features) {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SparseFeatures>) {
          return f.rows.size();
        } else if constexpr (std::is_same_v<T, DenseMatrix>) {
          return static_cast<std::size_t>(f.rows());
        } else {
          return f.sequences.size();
        }
      },
      features);
}

std::string_view to_string(FeatureContract contract) {
  switch (contract) {
    case FeatureContract::sparse:
      return "sparse";
    case FeatureContract::dense:
      return "dense";
    case FeatureContract::token_sequence:
      return "token-sequence";
  }
  return "?";
}

FeatureContract feature_contract_from_string(std::string_view name) {
  if (name == "sparse") return FeatureContract::sparse;
  if (name == "dense") return FeatureContract::dense;
  if (name == "token-sequence") return FeatureContract::token_sequence;
  throw ValidationError(fmt::format("unknown feature contract '{}'", name));
}

DenseMatrix densify(const SparseFeatures& features) {
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(features.rows.size()),
                                      static_cast<Eigen::Index>(features.dim));
  for (std::size_t r = 0; r < features.rows.size(); ++r) {
    const auto& row = features.rows[r];
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      out(static_cast<Eigen::Index>(r), row.indices[k]) = row.values[k];
    }
  }
  return out;
}

Features select_rows(const Features& features, std::span<const std::size_t> rows) {
  return std::visit(
      [&](const auto& f) -> Features {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SparseFeatures>) {
          SparseFeatures out;
          out.dim = f.dim;
          for (auto r : rows) out.rows.push_back(f.rows.at(r));
          return out;
        } else if constexpr (std::is_same_v<T, DenseMatrix>) {
          DenseMatrix out(static_cast<Eigen::Index>(rows.size()), f.cols());
          for (std::size_t i = 0; i < rows.size(); ++i) {
            out.row(static_cast<Eigen::Index>(i)) = f.row(static_cast<Eigen::Index>(rows[i]));
          }
          return out;
        } else {
          SequenceFeatures out;
          for (auto r : rows) out.sequences.push_back(f.sequences.at(r));
          return out;
        }
      },
      features);
}

Standardizer Standardizer::fit(const DenseMatrix& x) {
  Standardizer s;
  const auto n = static_cast<double>(x.rows());
  s.mean_ = DenseVector::Zero(x.cols());
  s.scale_ = DenseVector::Ones(x.cols());
  if (x.rows() == 0) return s;
  s.mean_ = x.colwise().sum().transpose() / n;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean_(j)).square().sum() / n;
    if (var > 1e-24) s.scale_(j) = std::sqrt(var);
  }
  return s;
}

DenseMatrix Standardizer::transform(const DenseMatrix& x) const {
  DenseMatrix out = x;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    out.row(r) = (out.row(r) - mean_.transpose()).cwiseQuotient(scale_.transpose());
  }
  return out;
}

void check_finite(const Features& features, std::string_view what) {
  bool ok = true;
  if (const auto* sparse = std::get_if<SparseFeatures>(&features)) {
    for (const auto& row : sparse->rows) {
      for (double v : row.values) ok = ok && std::isfinite(v);
    }
  } else if (const auto* dense = std::get_if<DenseMatrix>(&features)) {
    ok = dense->allFinite();
  }
  if (!ok) throw ValidationError(fmt::format("{}: features contain non-finite values", what));
}

}  // namespace newscat
