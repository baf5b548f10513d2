#include "newscat/smote.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "newscat/error.hpp"
#include "newscat/random.hpp"

namespace newscat {

std::vector<std::vector<std::size_t>> same_class_neighbors(const DenseMatrix& x,
                                                           std::span<const std::size_t> members,
                                                           std::size_t k) {
  std::vector<std::vector<std::size_t>> out(members.size());
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t a = 0; a < members.size(); ++a) {
    dist.clear();
    const auto ra = x.row(static_cast<Eigen::Index>(members[a]));
    for (std::size_t b = 0; b < members.size(); ++b) {
      if (a == b) continue;
      const double d = (ra - x.row(static_cast<Eigen::Index>(members[b]))).squaredNorm();
      dist.emplace_back(d, members[b]);
    }
    const std::size_t take = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
    for (std::size_t i = 0; i < take; ++i) out[a].push_back(dist[i].second);
  }
  return out;
}

SmoteResult smote_fit_resample(const DenseMatrix& x, std::span<const Label> y, const SmoteConfig& config) {
  if (config.k < 1) throw ConfigError("smote: k must be at least 1");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ValidationError("smote: feature rows and labels differ in length");
  }
  if (!x.allFinite()) throw ValidationError("smote: features contain non-finite values");

  Label max_label = -1;
  for (Label l : y) {
    if (l < 0) throw ValidationError("smote: negative label");
    max_label = std::max(max_label, l);
  }
  const auto n_classes = static_cast<std::size_t>(max_label + 1);
  std::vector<std::vector<std::size_t>> members(n_classes);
  for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(i);

  std::size_t target = 0;
  for (const auto& m : members) target = std::max(target, m.size());
  if (config.target_count) target = std::max(target, *config.target_count);

  std::size_t total = y.size();
  for (const auto& m : members) {
    if (!m.empty()) total += target - m.size();
  }

  SmoteResult out;
  out.features.resize(static_cast<Eigen::Index>(total), x.cols());
  out.features.topRows(x.rows()) = x;
  out.labels.assign(y.begin(), y.end());
  out.labels.reserve(total);
  Eigen::Index next = x.rows();

  for (std::size_t c = 0; c < n_classes; ++c) {
    const auto& m = members[c];
    if (m.empty() || m.size() >= target) continue;
    if (m.size() < 2) {
      throw UnsatisfiableNeighborsError(
          fmt::format("smote: class {} has a single sample, no neighbour to interpolate with", c));
    }
    const std::size_t k_eff = std::min(config.k, m.size() - 1);
    if (k_eff < config.k) {
      spdlog::info("smote: class {} has {} samples, using k={} instead of {}", c, m.size(), k_eff,
                   config.k);
    }
    const auto neighbors = same_class_neighbors(x, m, k_eff);
    Rng rng(mix_seed(config.seed, c));
    const std::size_t needed = target - m.size();
    for (std::size_t j = 0; j < needed; ++j) {
      const std::size_t base = j % m.size();
      const std::size_t nn = neighbors[base][rng.index(k_eff)];
      const double u = rng.uniform();
      const auto xb = x.row(static_cast<Eigen::Index>(m[base]));
      const auto xn = x.row(static_cast<Eigen::Index>(nn));
      for (Eigen::Index d = 0; d < x.cols(); ++d) {
        out.features(next, d) = xb(d) + u * (xn(d) - xb(d));
      }
      out.labels.push_back(static_cast<Label>(c));
      ++next;
    }
  }
  return out;
}

}  // namespace newscat
