#include "newscat/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "newscat/error.hpp"
#include "newscat/json_eigen.hpp"
#include "newscat/numeric.hpp"

namespace newscat {

namespace {

std::vector<std::size_t> count_classes(std::span<const Label> y, std::size_t n_classes) {
  std::vector<std::size_t> counts(n_classes, 0);
  for (Label l : y) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
      throw ValidationError(fmt::format("label {} outside [0, {})", l, n_classes));
    }
    ++counts[static_cast<std::size_t>(l)];
  }
  return counts;
}

DenseVector log_prior(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  DenseVector p(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t c = 0; c < counts.size(); ++c) {
    p(static_cast<Eigen::Index>(c)) = counts[c] ? std::log(static_cast<double>(counts[c]) / total)
                                                : -std::numeric_limits<double>::infinity();
  }
  return p;
}

}  // namespace

void NbConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("naive bayes: alpha must be positive");
  if (!(var_floor > 0.0)) throw ConfigError("naive bayes: var_floor must be positive");
}

MultinomialNb MultinomialNb::fit(const Features& x, std::span<const Label> y, std::size_t n_classes,
                                 const NbConfig& config) {
  config.validate();
  if (num_rows(x) != y.size()) throw ValidationError("naive bayes: rows and labels differ in length");
  check_finite(x, "naive bayes");

  MultinomialNb nb;
  nb.class_counts_ = count_classes(y, n_classes);
  nb.contract_ = contract_of(x);
  const auto c_n = static_cast<Eigen::Index>(n_classes);

  DenseMatrix counts;
  if (const auto* sparse = std::get_if<SparseFeatures>(&x)) {
    counts = DenseMatrix::Zero(c_n, static_cast<Eigen::Index>(sparse->dim));
    for (std::size_t i = 0; i < sparse->rows.size(); ++i) {
      const auto& row = sparse->rows[i];
      for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.values[k] < 0.0) throw ContractError("multinomial naive bayes needs non-negative features");
        counts(y[i], row.indices[k]) += row.values[k];
      }
    }
  } else if (const auto* dense = std::get_if<DenseMatrix>(&x)) {
    if ((dense->array() < 0.0).any()) {
      throw ContractError("multinomial naive bayes needs non-negative features");
    }
    counts = DenseMatrix::Zero(c_n, dense->cols());
    for (Eigen::Index i = 0; i < dense->rows(); ++i) counts.row(y[static_cast<std::size_t>(i)]) += dense->row(i);
  } else {
    throw ContractError("multinomial naive bayes cannot consume token sequences");
  }

  const double d = static_cast<double>(counts.cols());
  nb.feature_log_prob_.resize(counts.rows(), counts.cols());
  for (Eigen::Index c = 0; c < counts.rows(); ++c) {
    const double denom = counts.row(c).sum() + config.alpha * d;
    nb.feature_log_prob_.row(c) = ((counts.row(c).array() + config.alpha) / denom).log();
  }
  return nb;
}

DenseVector MultinomialNb::class_log_prior() const { return log_prior(class_counts_); }

DenseMatrix MultinomialNb::joint_log_likelihood(const Features& x) const {
  if (contract_of(x) != contract_) {
    throw ContractError(fmt::format("multinomial naive bayes trained on {} features, got {}",
                                    to_string(contract_), to_string(contract_of(x))));
  }
  const DenseVector prior = class_log_prior();
  const auto n = static_cast<Eigen::Index>(num_rows(x));
  DenseMatrix jll(n, feature_log_prob_.rows());
  if (const auto* sparse = std::get_if<SparseFeatures>(&x)) {
    for (Eigen::Index i = 0; i < n; ++i) {
      jll.row(i) = prior.transpose();
      const auto& row = sparse->rows[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.indices[k] >= feature_log_prob_.cols()) continue;
        jll.row(i) += row.values[k] * feature_log_prob_.col(row.indices[k]).transpose();
      }
    }
  } else {
    const auto& dense = std::get<DenseMatrix>(x);
    if (dense.cols() != feature_log_prob_.cols()) throw ContractError("naive bayes: feature width mismatch");
    jll = dense * feature_log_prob_.transpose();
    jll.rowwise() += prior.transpose();
  }
  return jll;
}

DenseMatrix MultinomialNb::predict_proba(const Features& x) const {
  DenseMatrix p = joint_log_likelihood(x);
  softmax_rows(p);
  return p;
}

nlohmann::json MultinomialNb::to_json() const {
  return {{"feature_log_prob", matrix_to_json(feature_log_prob_)},
          {"class_counts", class_counts_},
          {"contract", std::string(to_string(contract_))}};
}

MultinomialNb MultinomialNb::from_json(const nlohmann::json& j) {
  MultinomialNb nb;
  nb.feature_log_prob_ = matrix_from_json<DenseMatrix>(j.at("feature_log_prob"));
  nb.class_counts_ = j.at("class_counts").get<std::vector<std::size_t>>();
  nb.contract_ = feature_contract_from_string(j.at("contract").get<std::string>());
  return nb;
}

GaussianNb GaussianNb::fit(const DenseMatrix& x, std::span<const Label> y, std::size_t n_classes,
                           const NbConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ValidationError("naive bayes: rows and labels differ in length");
  }
  if (!x.allFinite()) throw ValidationError("naive bayes: features contain non-finite values");
  GaussianNb nb;
  nb.class_counts_ = count_classes(y, n_classes);
  const auto c_n = static_cast<Eigen::Index>(n_classes);
  nb.means_ = DenseMatrix::Zero(c_n, x.cols());
  nb.variances_ = DenseMatrix::Ones(c_n, x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) nb.means_.row(y[static_cast<std::size_t>(i)]) += x.row(i);
  DenseMatrix sq = DenseMatrix::Zero(c_n, x.cols());
  for (Eigen::Index c = 0; c < c_n; ++c) {
    const auto n = static_cast<double>(nb.class_counts_[static_cast<std::size_t>(c)]);
    if (n > 0) nb.means_.row(c) /= n;
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Label c = y[static_cast<std::size_t>(i)];
    sq.row(c).array() += (x.row(i) - nb.means_.row(c)).array().square();
  }
  for (Eigen::Index c = 0; c < c_n; ++c) {
    const auto n = static_cast<double>(nb.class_counts_[static_cast<std::size_t>(c)]);
    if (n > 0) nb.variances_.row(c) = (sq.row(c) / n).array().max(config.var_floor);
  }
  return nb;
}

DenseMatrix GaussianNb::predict_proba(const DenseMatrix& x) const {
  if (x.cols() != means_.cols()) throw ContractError("gaussian naive bayes: feature width mismatch");
  const DenseVector prior = log_prior(class_counts_);
  DenseMatrix jll(x.rows(), means_.rows());
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  for (Eigen::Index c = 0; c < means_.rows(); ++c) {
    const double norm = -0.5 * (variances_.row(c).array().log().sum() +
                                log_2pi * static_cast<double>(means_.cols()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double quad = ((x.row(i) - means_.row(c)).array().square() / variances_.row(c).array()).sum();
      jll(i, c) = prior(c) + norm - 0.5 * quad;
    }
  }
  softmax_rows(jll);
  return jll;
}

nlohmann::json GaussianNb::to_json() const {
  return {{"means", matrix_to_json(means_)},
          {"variances", matrix_to_json(variances_)},
          {"class_counts", class_counts_}};
}

GaussianNb GaussianNb::from_json(const nlohmann::json& j) {
  GaussianNb nb;
  nb.means_ = matrix_from_json<DenseMatrix>(j.at("means"));
  nb.variances_ = matrix_from_json<DenseMatrix>(j.at("variances"));
  nb.class_counts_ = j.at("class_counts").get<std::vector<std::size_t>>();
  return nb;
}

}  // namespace newscat
