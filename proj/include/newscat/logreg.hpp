#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "newscat/corpus.hpp"
#include "newscat/features.hpp"

namespace newscat {

struct LogregConfig {
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::size_t max_iters = 500;  // 0 leaves the zero initialization
  double tol = 1e-7;            // stop once an iteration improves the loss by less

  void validate() const;
};

// Mean softmax cross-entropy + (l2 / 2) * ||W||^2 (bias unregularized) and
// its gradient. Weights are features x classes.
struct LogregObjective {
  double loss = 0.0;
  DenseMatrix grad_weights;
  DenseVector grad_bias;
};

LogregObjective logreg_objective(const Features& x, std::span<const Label> y, const DenseMatrix& weights,
                                 const DenseVector& bias, double l2);

DenseMatrix linear_logits(const Features& x, const DenseMatrix& weights, const DenseVector& bias);

// Softmax regression fitted by full-batch gradient descent from zero weights.
class LogisticRegression {
 public:
  static LogisticRegression fit(const Features& x, std::span<const Label> y, std::size_t n_classes,
                                const LogregConfig& config);

  DenseMatrix predict_proba(const Features& x) const;

  const DenseMatrix& weights() const { return weights_; }
  const DenseVector& bias() const { return bias_; }
  // Loss before the first step and after every step taken.
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  FeatureContract contract() const { return contract_; }

  nlohmann::json to_json() const;
  static LogisticRegression from_json(const nlohmann::json& j);

 private:
  DenseMatrix weights_;
  DenseVector bias_;
  std::vector<double> loss_trace_;
  FeatureContract contract_ = FeatureContract::dense;
};

}  // namespace newscat
