#pragma once

#include <span>

#include <json.hpp>

#include "newscat/corpus.hpp"
#include "newscat/features.hpp"

namespace newscat {

struct NbConfig {
  double alpha = 1.0;      // Laplace smoothing for the multinomial variant
  double var_floor = 1e-9; // minimum per-feature variance for the gaussian variant

  void validate() const;
};

// Multinomial NB over non-negative sparse or dense features:
//   P(j | c) = (N_cj + alpha) / (N_c + alpha * d)
class MultinomialNb {
 public:
  static MultinomialNb fit(const Features& x, std::span<const Label> y, std::size_t n_classes,
                           const NbConfig& config);

  DenseMatrix joint_log_likelihood(const Features& x) const;
  DenseMatrix predict_proba(const Features& x) const;

  const DenseMatrix& feature_log_prob() const { return feature_log_prob_; }  // classes x features
  DenseVector class_log_prior() const;
  FeatureContract contract() const { return contract_; }

  nlohmann::json to_json() const;
  static MultinomialNb from_json(const nlohmann::json& j);

 private:
  DenseMatrix feature_log_prob_;
  std::vector<std::size_t> class_counts_;
  FeatureContract contract_ = FeatureContract::sparse;
};

// Gaussian NB over dense features; variances floored at var_floor.
class GaussianNb {
 public:
  static GaussianNb fit(const DenseMatrix& x, std::span<const Label> y, std::size_t n_classes,
                        const NbConfig& config);

  DenseMatrix predict_proba(const DenseMatrix& x) const;

  const DenseMatrix& means() const { return means_; }
  const DenseMatrix& variances() const { return variances_; }

  nlohmann::json to_json() const;
  static GaussianNb from_json(const nlohmann::json& j);

 private:
  DenseMatrix means_;
  DenseMatrix variances_;
  std::vector<std::size_t> class_counts_;
};

}  // namespace newscat
