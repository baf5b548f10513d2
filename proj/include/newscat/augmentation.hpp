#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "newscat/corpus.hpp"
#include "newscat/embeddings.hpp"
#include "newscat/random.hpp"

namespace newscat {

struct AugmentConfig {
  std::size_t n_copies = 20;
  double replace_prob = 0.15;
  std::size_t k_neighbors = 5;
  double min_similarity = 0.5;
  std::uint64_t seed = 1;

  void validate() const;
};

// Embedding-neighbour word replacement.
//
// For each token, in order: draw u = rng.uniform(); if u < replace_prob and
// the token has candidates (its top-k neighbours with similarity >=
// min_similarity), replace it with candidates[rng.index(#candidates)].
// Tokens without candidates consume only the first draw.
class Augmenter {
 public:
  Augmenter(const EmbeddingTable& table, AugmentConfig config);

  std::vector<std::string> augment_sentence(std::span<const std::string> tokens, Rng& rng) const;

  // Originals first, then copy 1..n of each source in source order. Copies
  // keep their source's label and get id `<source id>#aug<copy>`.
  LabeledCorpus augment_training_set(const LabeledCorpus& train) const;

  // Generator for copy `copy` (1-based) of document `source_id`.
  Rng copy_rng(const std::string& source_id, std::size_t copy) const;

  const std::vector<std::string>& candidates(const std::string& token) const;
  const AugmentConfig& config() const { return config_; }

 private:
  const EmbeddingTable* table_;
  AugmentConfig config_;
  NeighborIndex index_;
  mutable std::unordered_map<std::string, std::vector<std::string>> cache_;
};

std::vector<std::string> augment_sentence(std::span<const std::string> tokens,
                                          const EmbeddingTable& table, const AugmentConfig& config,
                                          Rng& rng);

LabeledCorpus augment_training_set(const LabeledCorpus& train, const EmbeddingTable& table,
                                   const AugmentConfig& config);

}  // namespace newscat
