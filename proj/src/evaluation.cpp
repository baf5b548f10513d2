#include "newscat/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "newscat/error.hpp"
#include "newscat/random.hpp"

namespace newscat {

std::vector<std::size_t> FoldSplit::train_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < folds.size(); ++g) {
    if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldSplit stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError(fmt::format("k-fold: k must be at least 2, got {}", k));
  if (labels.empty()) throw EmptyCorpusError("k-fold: no samples");
  Label max_label = 0;
  for (Label l : labels) {
    if (l < 0) throw ValidationError("k-fold: negative label");
    max_label = std::max(max_label, l);
  }
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  std::size_t smallest = labels.size();
  for (const auto& m : members) {
    if (!m.empty()) smallest = std::min(smallest, m.size());
  }
  if (smallest < k) {
    spdlog::warn("k-fold: smallest class has {} members, lowering k from {} to {}", smallest, k, smallest);
    k = smallest;
    if (k < 2) throw ConfigError("k-fold: a class has a single member, cannot split into 2 folds");
  }

  FoldSplit split;
  split.k = k;
  split.folds.resize(k);
  std::size_t next = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& m = members[c];
    Rng rng(mix_seed(seed, c));
    for (std::size_t i = m.size(); i > 1; --i) std::swap(m[i - 1], m[rng.index(i)]);
    for (std::size_t idx : m) {
      split.folds[next].push_back(idx);
      next = (next + 1) % k;
    }
  }
  for (auto& f : split.folds) std::sort(f.begin(), f.end());
  return split;
}

std::size_t MetricsReport::total() const {
  std::size_t t = 0;
  for (const auto& row : confusion) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

MetricsReport confusion_and_metrics(std::span<const Label> y_true, std::span<const Label> y_pred,
                                    std::size_t n_classes) {
  if (y_true.empty()) throw EmptyCorpusError("metrics: no predictions");
  if (y_true.size() != y_pred.size()) throw ValidationError("metrics: y_true and y_pred differ in length");
  MetricsReport r;
  r.n_classes = n_classes;
  r.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const Label t = y_true[i], p = y_pred[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= n_classes || static_cast<std::size_t>(p) >= n_classes) {
      throw ValidationError(fmt::format("metrics: label outside [0, {})", n_classes));
    }
    ++r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  r.precision.assign(n_classes, 0.0);
  r.recall.assign(n_classes, 0.0);
  r.f1.assign(n_classes, 0.0);
  r.present.assign(n_classes, 0);
  std::size_t correct = 0, n_present = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::size_t tp = r.confusion[c][c], row = 0, col = 0;
    for (std::size_t o = 0; o < n_classes; ++o) {
      row += r.confusion[c][o];
      col += r.confusion[o][c];
    }
    correct += tp;
    if (row == 0 && col == 0) continue;
    r.present[c] = 1;
    ++n_present;
    if (col > 0) {
      r.precision[c] = static_cast<double>(tp) / static_cast<double>(col);
    } else {
      spdlog::debug("metrics: class {} never predicted, precision counted as 0", c);
    }
    if (row > 0) {
      r.recall[c] = static_cast<double>(tp) / static_cast<double>(row);
    } else {
      spdlog::debug("metrics: class {} absent from y_true, recall counted as 0", c);
    }
    const double s = r.precision[c] + r.recall[c];
    r.f1[c] = s > 0.0 ? 2.0 * r.precision[c] * r.recall[c] / s : 0.0;
    r.precision_macro += r.precision[c];
    r.recall_macro += r.recall[c];
    r.f1_macro += r.f1[c];
  }
  r.precision_macro /= static_cast<double>(n_present);
  r.recall_macro /= static_cast<double>(n_present);
  r.f1_macro /= static_cast<double>(n_present);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());
  return r;
}

double macro_f1(std::span<const Label> y_true, std::span<const Label> y_pred, std::size_t n_classes) {
  return confusion_and_metrics(y_true, y_pred, n_classes).f1_macro;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

ConfidenceInterval bootstrap_f1_ci(std::span<const Label> y_true, std::span<const Label> y_pred,
                                   std::size_t n_classes, const BootstrapConfig& config) {
  if (y_true.empty()) throw EmptyCorpusError("bootstrap: no predictions");
  if (y_true.size() != y_pred.size()) throw ValidationError("bootstrap: y_true and y_pred differ in length");
  if (config.n_resamples == 0 || !(config.level > 0.0 && config.level < 1.0)) {
    throw ConfigError("bootstrap: need n_resamples > 0 and level in (0, 1)");
  }
  const std::size_t n = y_true.size();
  Rng rng(config.seed);
  std::vector<Label> t(n), p(n);
  std::vector<double> scores;
  scores.reserve(config.n_resamples);
  for (std::size_t r = 0; r < config.n_resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rng.index(n);
      t[i] = y_true[j];
      p[i] = y_pred[j];
    }
    scores.push_back(macro_f1(t, p, n_classes));
  }
  const double alpha = (1.0 - config.level) / 2.0;
  return {quantile(scores, alpha), quantile(scores, 1.0 - alpha)};
}

nlohmann::json to_json(const MetricsReport& report, const LabelSet& labels) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < report.n_classes; ++c) {
    per_class.push_back({{"label", c < labels.size() ? labels.name(static_cast<Label>(c)) : std::to_string(c)},
                         {"precision", report.precision[c]},
                         {"recall", report.recall[c]},
                         {"f1", report.f1[c]},
                         {"support", std::accumulate(report.confusion[c].begin(), report.confusion[c].end(),
                                                     std::size_t{0})}});
  }
  return {{"precision_macro", report.precision_macro},
          {"recall_macro", report.recall_macro},
          {"f1_macro", report.f1_macro},
          {"accuracy", report.accuracy},
          {"f1_ci", {report.f1_ci.low, report.f1_ci.high}},
          {"confusion", report.confusion},
          {"n_oov_docs", report.n_oov_docs},
          {"per_class", std::move(per_class)}};
}

}  // namespace newscat
