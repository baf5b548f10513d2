#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newscat/corpus.hpp"

namespace newscat {

struct FoldSplit {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;  // test indices per fold, ascending

  // All indices outside fold `f`, ascending.
  std::vector<std::size_t> train_indices(std::size_t f) const;
};

// Shuffles each class with its own seeded generator and deals its members
// round-robin over the folds, continuing the rotation from one class to the
// next. If the smallest class has fewer than k members k is lowered to that
// size with a warning. Throws ConfigError when k (possibly lowered) < 2.
FoldSplit stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;

  bool operator==(const ConfidenceInterval&) const = default;
};

struct MetricsReport {
  std::size_t n_classes = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<double> precision;                     // per class
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<char> present;  // class appears in y_true or y_pred
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  double accuracy = 0.0;
  ConfidenceInterval f1_ci;
  std::size_t n_oov_docs = 0;

  std::size_t total() const;
  bool operator==(const MetricsReport&) const = default;
};

// Per-class precision/recall/F1 with 0 for zero denominators. Macro averages
// run over the classes that occur in y_true or y_pred.
MetricsReport confusion_and_metrics(std::span<const Label> y_true, std::span<const Label> y_pred,
                                    std::size_t n_classes);

double macro_f1(std::span<const Label> y_true, std::span<const Label> y_pred, std::size_t n_classes);

struct BootstrapConfig {
  std::size_t n_resamples = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;
};

// Percentile interval of macro-F1 over paired resamples with replacement.
// Resample r takes indices rng.index(n) for r = 0..n_resamples-1 in order from
// a single Rng(seed); quantiles interpolate linearly between order statistics.
ConfidenceInterval bootstrap_f1_ci(std::span<const Label> y_true, std::span<const Label> y_pred,
                                   std::size_t n_classes, const BootstrapConfig& config = {});

// Linear interpolation between order statistics (numpy's default).
double quantile(std::vector<double> values, double q);

nlohmann::json to_json(const MetricsReport& report, const LabelSet& labels);

}  // namespace newscat
