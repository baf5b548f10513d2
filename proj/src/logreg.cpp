#include "newscat/logreg.hpp"

#include <cmath>

#include <fmt/format.h>

#include "newscat/error.hpp"
#include "newscat/json_eigen.hpp"
#include "newscat/numeric.hpp"

namespace newscat {

void LogregConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("logreg: learning_rate must be positive");
  if (!(l2 >= 0.0)) throw ConfigError("logreg: l2 must be non-negative");
  if (!(tol >= 0.0)) throw ConfigError("logreg: tol must be non-negative");
}

namespace {

std::size_t feature_width(const Features& x) {
  if (const auto* s = std::get_if<SparseFeatures>(&x)) return s->dim;
  if (const auto* d = std::get_if<DenseMatrix>(&x)) return static_cast<std::size_t>(d->cols());
  throw ContractError("logistic regression cannot consume token sequences");
}

}  // namespace

DenseMatrix linear_logits(const Features& x, const DenseMatrix& weights, const DenseVector& bias) {
  if (const auto* dense = std::get_if<DenseMatrix>(&x)) {
    if (dense->cols() != weights.rows()) throw ContractError("logreg: feature width mismatch");
    DenseMatrix logits = (*dense) * weights;
    logits.rowwise() += bias.transpose();
    return logits;
  }
  const auto* sparse = std::get_if<SparseFeatures>(&x);
  if (!sparse) throw ContractError("logistic regression cannot consume token sequences");
  DenseMatrix logits(static_cast<Eigen::Index>(sparse->rows.size()), weights.cols());
  for (std::size_t i = 0; i < sparse->rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    logits.row(r) = bias.transpose();
    const auto& row = sparse->rows[i];
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      if (row.indices[k] >= weights.rows()) continue;
      logits.row(r) += row.values[k] * weights.row(row.indices[k]);
    }
  }
  return logits;
}

LogregObjective logreg_objective(const Features& x, std::span<const Label> y, const DenseMatrix& weights,
                                 const DenseVector& bias, double l2) {
  const std::size_t n = y.size();
  if (num_rows(x) != n) throw ValidationError("logreg: rows and labels differ in length");
  DenseMatrix p = linear_logits(x, weights, bias);
  DenseMatrix logp = p;
  for (Eigen::Index r = 0; r < logp.rows(); ++r) {
    const double mx = logp.row(r).maxCoeff();
    const double lse = mx + std::log((logp.row(r).array() - mx).exp().sum());
    logp.row(r).array() -= lse;
  }
  p = logp.array().exp();

  LogregObjective obj;
  const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;
  double ce = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ce -= logp(static_cast<Eigen::Index>(i), y[i]);
    p(static_cast<Eigen::Index>(i), y[i]) -= 1.0;  // p now holds d(loss_i)/d(logits_i)
  }
  obj.loss = ce * inv_n + 0.5 * l2 * weights.squaredNorm();
  obj.grad_bias = p.colwise().sum().transpose() * inv_n;

  if (const auto* dense = std::get_if<DenseMatrix>(&x)) {
    obj.grad_weights = dense->transpose() * p * inv_n;
  } else {
    const auto& sparse = std::get<SparseFeatures>(x);
    obj.grad_weights = DenseMatrix::Zero(weights.rows(), weights.cols());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = sparse.rows[i];
      for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.indices[k] >= weights.rows()) continue;
        obj.grad_weights.row(row.indices[k]) += row.values[k] * p.row(static_cast<Eigen::Index>(i)) * inv_n;
      }
    }
  }
  obj.grad_weights += l2 * weights;
  return obj;
}

LogisticRegression LogisticRegression::fit(const Features& x, std::span<const Label> y,
                                           std::size_t n_classes, const LogregConfig& config) {
  config.validate();
  if (n_classes < 2) throw ValidationError("logreg: needs at least two classes");
  check_finite(x, "logreg");
  for (Label l : y) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
      throw ValidationError(fmt::format("logreg: label {} outside [0, {})", l, n_classes));
    }
  }

  LogisticRegression model;
  model.contract_ = contract_of(x);
  const auto d = static_cast<Eigen::Index>(feature_width(x));
  const auto c = static_cast<Eigen::Index>(n_classes);
  model.weights_ = DenseMatrix::Zero(d, c);
  model.bias_ = DenseVector::Zero(c);

  LogregObjective obj = logreg_objective(x, y, model.weights_, model.bias_, config.l2);
  model.loss_trace_.push_back(obj.loss);
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    model.weights_ -= config.learning_rate * obj.grad_weights;
    model.bias_ -= config.learning_rate * obj.grad_bias;
    LogregObjective next = logreg_objective(x, y, model.weights_, model.bias_, config.l2);
    model.loss_trace_.push_back(next.loss);
    const bool converged = obj.loss - next.loss < config.tol;
    obj = std::move(next);
    if (converged) break;
  }
  return model;
}

DenseMatrix LogisticRegression::predict_proba(const Features& x) const {
  if (contract_of(x) != contract_) {
    throw ContractError(fmt::format("logistic regression trained on {} features, got {}",
                                    to_string(contract_), to_string(contract_of(x))));
  }
  DenseMatrix p = linear_logits(x, weights_, bias_);
  softmax_rows(p);
  return p;
}

nlohmann::json LogisticRegression::to_json() const {
  return {{"weights", matrix_to_json(weights_)},
          {"bias", vector_to_json(bias_)},
          {"contract", std::string(to_string(contract_))}};
}

LogisticRegression LogisticRegression::from_json(const nlohmann::json& j) {
  LogisticRegression m;
  m.weights_ = matrix_from_json<DenseMatrix>(j.at("weights"));
  m.bias_ = vector_from_json(j.at("bias"));
  m.contract_ = feature_contract_from_string(j.at("contract").get<std::string>());
  return m;
}

}  // namespace newscat
