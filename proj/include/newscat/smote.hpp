#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "newscat/corpus.hpp"
#include "newscat/features.hpp"

namespace newscat {

struct SmoteConfig {
  std::size_t k = 5;
  // Every class is raised to max(target_count, its size). Unset means the
  // majority-class count.
  std::optional<std::size_t> target_count;
  std::uint64_t seed = 1;
};

struct SmoteResult {
  DenseMatrix features;       // originals first, unchanged, then synthetic rows
  std::vector<Label> labels;  // synthetic rows grouped by ascending class id
};

// SMOTE oversampling. For class c needing m new rows, sample j = 0..m-1
// uses base member members[j % n_c], a neighbour picked with rng.index(k')
// from its k' = min(k, n_c - 1) nearest same-class members (Euclidean,
// ties by row index), and u = rng.uniform(); the new row is
// x + u * (neighbour - x). Class c draws from Rng(mix_seed(seed, c)).
SmoteResult smote_fit_resample(const DenseMatrix& x, std::span<const Label> y, const SmoteConfig& config);

// k nearest members of `members` for each member (excluding itself), as row
// indices into x.
std::vector<std::vector<std::size_t>> same_class_neighbors(const DenseMatrix& x,
                                                           std::span<const std::size_t> members,
                                                           std::size_t k);

}  // namespace newscat
