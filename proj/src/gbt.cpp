#include "newscat/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "newscat/error.hpp"
#include "newscat/numeric.hpp"

namespace newscat {

void GbtConfig::validate() const {
  if (n_rounds == 0 || max_depth == 0) throw ConfigError("gbt: n_rounds and max_depth must be positive");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ConfigError("gbt: learning_rate must lie in (0, 1]");
  }
  if (!(lambda >= 0.0) || !(min_child_weight >= 0.0)) {
    throw ConfigError("gbt: lambda and min_child_weight must be non-negative");
  }
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

TreeBuilder::TreeBuilder(const DenseMatrix& x) : columns_(x), sorted_(static_cast<std::size_t>(x.cols())) {
  const auto n = static_cast<std::uint32_t>(x.rows());
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    auto& order = sorted_[static_cast<std::size_t>(f)];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    const double* col = columns_.col(f).data();
    std::stable_sort(order.begin(), order.end(), [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

double score(double g, double h, double lambda) { return g * g / (h + lambda); }

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

}  // namespace

RegressionTree TreeBuilder::build(std::span<const double> grad, std::span<const double> hess,
                                  const GbtConfig& config) const {
  const std::size_t n = grad.size();
  std::vector<TreeNode> nodes(1);
  std::vector<int> node_of(n, 0);
  std::vector<int> frontier{0};

  // Per-frontier-slot accumulators, indexed by slot of the node in `frontier`.
  std::vector<int> slot_of_node(1, 0);

  for (std::size_t depth = 0; depth < config.max_depth && !frontier.empty(); ++depth) {
    const std::size_t m = frontier.size();
    slot_of_node.assign(nodes.size(), -1);
    for (std::size_t s = 0; s < m; ++s) slot_of_node[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);

    std::vector<double> g_tot(m, 0.0), h_tot(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int s = node_of[i] >= 0 ? slot_of_node[static_cast<std::size_t>(node_of[i])] : -1;
      if (s < 0) continue;
      g_tot[static_cast<std::size_t>(s)] += grad[i];
      h_tot[static_cast<std::size_t>(s)] += hess[i];
    }

    std::vector<SplitCandidate> best(m);
    std::vector<double> g_left(m), h_left(m), last(m);
    std::vector<char> has_last(m);
    for (std::size_t f = 0; f < sorted_.size(); ++f) {
      std::fill(g_left.begin(), g_left.end(), 0.0);
      std::fill(h_left.begin(), h_left.end(), 0.0);
      std::fill(has_last.begin(), has_last.end(), 0);
      const double* col = columns_.col(static_cast<Eigen::Index>(f)).data();
      for (std::uint32_t i : sorted_[f]) {
        const int node = node_of[i];
        if (node < 0) continue;
        const int slot = slot_of_node[static_cast<std::size_t>(node)];
        if (slot < 0) continue;
        const auto s = static_cast<std::size_t>(slot);
        const double v = col[i];
        if (has_last[s] && v > last[s]) {
          const double gl = g_left[s], hl = h_left[s];
          const double gr = g_tot[s] - gl, hr = h_tot[s] - hl;
          if (hl >= config.min_child_weight && hr >= config.min_child_weight) {
            const double gain = 0.5 * (score(gl, hl, config.lambda) + score(gr, hr, config.lambda) -
                                       score(g_tot[s], h_tot[s], config.lambda));
            if (gain > best[s].gain) {
              double thr = last[s] + 0.5 * (v - last[s]);
              if (!(thr > last[s])) thr = v;
              best[s] = {gain, static_cast<int>(f), thr};
            }
          }
        }
        g_left[s] += grad[i];
        h_left[s] += hess[i];
        last[s] = v;
        has_last[s] = 1;
      }
    }

    std::vector<int> next_frontier;
    for (std::size_t s = 0; s < m; ++s) {
      const int id = frontier[s];
      if (best[s].feature < 0 || !(best[s].gain > 1e-12)) {
        nodes[static_cast<std::size_t>(id)].value =
            -config.learning_rate * g_tot[s] / (h_tot[s] + config.lambda);
        continue;
      }
      const int left = static_cast<int>(nodes.size());
      nodes.push_back({});
      nodes.push_back({});
      auto& node = nodes[static_cast<std::size_t>(id)];
      node.feature = best[s].feature;
      node.threshold = best[s].threshold;
      node.left = left;
      node.right = left + 1;
      next_frontier.push_back(left);
      next_frontier.push_back(left + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const int id = node_of[i];
      if (id < 0) continue;
      const auto& node = nodes[static_cast<std::size_t>(id)];
      if (node.feature < 0) {
        node_of[i] = -1;  // settled in a leaf
        continue;
      }
      node_of[i] = columns_(static_cast<Eigen::Index>(i), node.feature) < node.threshold ? node.left : node.right;
    }
    frontier = std::move(next_frontier);
  }

  if (!frontier.empty()) {
    std::vector<double> g_tot(nodes.size(), 0.0), h_tot(nodes.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (node_of[i] < 0) continue;
      g_tot[static_cast<std::size_t>(node_of[i])] += grad[i];
      h_tot[static_cast<std::size_t>(node_of[i])] += hess[i];
    }
    for (int id : frontier) {
      const auto u = static_cast<std::size_t>(id);
      nodes[u].value = -config.learning_rate * g_tot[u] / (h_tot[u] + config.lambda);
    }
  }
  return RegressionTree(std::move(nodes));
}

GradientBoostedTrees GradientBoostedTrees::fit(const DenseMatrix& x, std::span<const Label> y,
                                               std::size_t n_classes, const GbtConfig& config) {
  config.validate();
  if (n_classes < 2) throw ValidationError("gbt: needs at least two classes");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw ValidationError("gbt: rows and labels differ");
  if (!x.allFinite()) throw ValidationError("gbt: features contain non-finite values");

  const std::size_t n = y.size();
  const auto c_n = static_cast<Eigen::Index>(n_classes);
  std::vector<double> counts(n_classes, 0.0);
  for (Label l : y) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
      throw ValidationError(fmt::format("gbt: label {} outside [0, {})", l, n_classes));
    }
    counts[static_cast<std::size_t>(l)] += 1.0;
  }

  GradientBoostedTrees model;
  model.n_features_ = x.cols();
  model.base_margin_.resize(c_n);
  for (Eigen::Index c = 0; c < c_n; ++c) {
    model.base_margin_(c) = std::log((counts[static_cast<std::size_t>(c)] + 1.0) /
                                     (static_cast<double>(n) + static_cast<double>(n_classes)));
  }

  const TreeBuilder builder(x);
  const std::vector<Label> labels(y.begin(), y.end());
  DenseMatrix margin(static_cast<Eigen::Index>(n), c_n);
  margin.rowwise() = model.base_margin_.transpose();
  DenseMatrix proba = margin;
  softmax_rows(proba);
  model.loss_trace_.push_back(mean_log_loss(proba, labels));

  std::vector<double> grad(n), hess(n);
  for (std::size_t round = 0; round < config.n_rounds; ++round) {
    std::vector<RegressionTree> trees;
    trees.reserve(n_classes);
    for (Eigen::Index c = 0; c < c_n; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = proba(static_cast<Eigen::Index>(i), c);
        grad[i] = p - (labels[i] == c ? 1.0 : 0.0);
        hess[i] = std::max(p * (1.0 - p), 1e-16);
      }
      trees.push_back(builder.build(grad, hess, config));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(static_cast<Eigen::Index>(i));
      for (Eigen::Index c = 0; c < c_n; ++c) {
        margin(static_cast<Eigen::Index>(i), c) += trees[static_cast<std::size_t>(c)].predict(row);
      }
    }
    model.rounds_.push_back(std::move(trees));
    proba = margin;
    softmax_rows(proba);
    model.loss_trace_.push_back(mean_log_loss(proba, labels));
  }
  return model;
}

DenseMatrix GradientBoostedTrees::margins(const DenseMatrix& x) const {
  if (x.cols() != n_features_) throw ContractError("gbt: feature width mismatch");
  DenseMatrix m(x.rows(), base_margin_.size());
  m.rowwise() = base_margin_.transpose();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    for (const auto& trees : rounds_) {
      for (std::size_t c = 0; c < trees.size(); ++c) m(i, static_cast<Eigen::Index>(c)) += trees[c].predict(row);
    }
  }
  return m;
}

DenseMatrix GradientBoostedTrees::predict_proba(const DenseMatrix& x) const {
  DenseMatrix p = margins(x);
  softmax_rows(p);
  return p;
}

nlohmann::json GradientBoostedTrees::to_json() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& trees : rounds_) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& tree : trees) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& nd : tree.nodes()) {
        nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
      }
      per_class.push_back(std::move(nodes));
    }
    rounds.push_back(std::move(per_class));
  }
  return {{"base_margin", std::vector<double>(base_margin_.data(), base_margin_.data() + base_margin_.size())},
          {"n_features", n_features_},
          {"rounds", std::move(rounds)}};
}

GradientBoostedTrees GradientBoostedTrees::from_json(const nlohmann::json& j) {
  GradientBoostedTrees m;
  const auto base = j.at("base_margin").get<std::vector<double>>();
  m.base_margin_ = Eigen::Map<const DenseVector>(base.data(), static_cast<Eigen::Index>(base.size()));
  m.n_features_ = j.at("n_features").get<Eigen::Index>();
  for (const auto& per_class : j.at("rounds")) {
    std::vector<RegressionTree> trees;
    for (const auto& nodes_json : per_class) {
      std::vector<TreeNode> nodes;
      for (const auto& nd : nodes_json) {
        nodes.push_back({nd.at(0).get<int>(), nd.at(1).get<double>(), nd.at(2).get<int>(),
                         nd.at(3).get<int>(), nd.at(4).get<double>()});
      }
      trees.emplace_back(std::move(nodes));
    }
    m.rounds_.push_back(std::move(trees));
  }
  return m;
}

}  // namespace newscat
