#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "newscat/corpus.hpp"
#include "newscat/features.hpp"

namespace newscat {

// In-place row softmax. Rows may contain -inf entries but not only -inf.
inline void softmax_rows(DenseMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
}

inline DenseVector softmax(const DenseVector& logits) {
  const double mx = logits.maxCoeff();
  DenseVector p = (logits.array() - mx).exp();
  return p / p.sum();
}

// Ties go to the lowest class id.
inline std::vector<Label> argmax_rows(const DenseMatrix& proba) {
  std::vector<Label> out(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index r = 0; r < proba.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < proba.cols(); ++c) {
      if (proba(r, c) > proba(r, best)) best = c;
    }
    out[static_cast<std::size_t>(r)] = static_cast<Label>(best);
  }
  return out;
}

// Mean multiclass cross-entropy of probability rows.
inline double mean_log_loss(const DenseMatrix& proba, const std::vector<Label>& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = proba(static_cast<Eigen::Index>(i), y[i]);
    sum -= std::log(std::max(p, std::numeric_limits<double>::min()));
  }
  return y.empty() ? 0.0 : sum / static_cast<double>(y.size());
}

}  // namespace newscat
