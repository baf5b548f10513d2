#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "newscat/corpus.hpp"
#include "newscat/features.hpp"

namespace newscat {

struct GbtConfig {
  std::size_t n_rounds = 50;
  std::size_t max_depth = 3;
  double learning_rate = 0.3;  // shrinkage applied to leaf weights
  double lambda = 1.0;         // L2 penalty on leaf weights
  double min_child_weight = 1.0;

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;  // rows with x[feature] < threshold
  int right = -1;
  double value = 0.0;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  template <typename Row>
  double predict(const Row& row) const {
    int n = 0;
    while (nodes_[static_cast<std::size_t>(n)].feature >= 0) {
      const auto& node = nodes_[static_cast<std::size_t>(n)];
      n = row(node.feature) < node.threshold ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(n)].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

// Fits one tree to per-sample gradients/hessians by exact greedy search over
// presorted features, maximizing
//   G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda).
// Leaf weight: -learning_rate * G / (H + lambda).
class TreeBuilder {
 public:
  explicit TreeBuilder(const DenseMatrix& x);

  RegressionTree build(std::span<const double> grad, std::span<const double> hess,
                       const GbtConfig& config) const;

 private:
  Eigen::MatrixXd columns_;  // column-major copy of x
  std::vector<std::vector<std::uint32_t>> sorted_;  // row order per feature
};

// Softmax gradient boosting: every round adds one tree per class on the
// class logits. Logits start at the log of add-one smoothed class priors.
class GradientBoostedTrees {
 public:
  static GradientBoostedTrees fit(const DenseMatrix& x, std::span<const Label> y, std::size_t n_classes,
                                  const GbtConfig& config);

  DenseMatrix margins(const DenseMatrix& x) const;
  DenseMatrix predict_proba(const DenseMatrix& x) const;

  std::size_t n_classes() const { return static_cast<std::size_t>(base_margin_.size()); }
  std::size_t n_rounds() const { return rounds_.size(); }
  const std::vector<std::vector<RegressionTree>>& rounds() const { return rounds_; }
  // Training log-loss before the first round and after every round.
  const std::vector<double>& loss_trace() const { return loss_trace_; }

  nlohmann::json to_json() const;
  static GradientBoostedTrees from_json(const nlohmann::json& j);

 private:
  DenseVector base_margin_;
  std::vector<std::vector<RegressionTree>> rounds_;
  std::vector<double> loss_trace_;
  Eigen::Index n_features_ = 0;
};

}  // namespace newscat
