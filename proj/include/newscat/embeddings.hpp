#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newscat/cleaning.hpp"
#include "newscat/features.hpp"
#include "newscat/vocabulary.hpp"

namespace newscat {

// Token -> dense vector, one row per token.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> tokens, DenseMatrix vectors);

  std::size_t size() const { return tokens_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const DenseMatrix& vectors() const { return vectors_; }
  auto vector(TokenId id) const { return vectors_.row(static_cast<Eigen::Index>(id)); }

  bool operator==(const EmbeddingTable& other) const {
    return tokens_ == other.tokens_ && vectors_ == other.vectors_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  DenseMatrix vectors_;
};

struct SgnsConfig {
  std::size_t dim = 300;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of its start value
  std::size_t min_count = 2;
  std::uint64_t seed = 1;

  // epochs may be 0 (returns the initialization); everything else positive.
  void validate() const;
};

struct SgnsResult {
  EmbeddingTable table;
  std::vector<double> epoch_mean_loss;  // mean loss per (center, context) pair
};

// Skip-gram with negative sampling over sentences of tokens. Context windows
// do not cross sentence boundaries. Negatives come from the unigram^0.75
// distribution; a draw equal to the center or the context word is skipped.
// Published vectors are input + output vectors. Single-threaded and
// bit-reproducible for a given seed.
SgnsResult train_sgns(const std::vector<std::vector<std::string>>& sentences,
                      const SgnsConfig& config);

// Loss of one (center, context, negatives) tuple:
//   -log s(ctx . c) - sum_k log s(-neg_k . c)
// and its gradient with respect to every vector involved.
struct SgnsGradient {
  double loss = 0.0;
  DenseVector center;
  DenseVector context;
  DenseMatrix negatives;  // one row per negative
};
double sgns_loss(const DenseVector& center, const DenseVector& context, const DenseMatrix& negatives);
SgnsGradient sgns_loss_and_gradient(const DenseVector& center, const DenseVector& context,
                                    const DenseMatrix& negatives);

// Reads plain-text files, one sentence per line, cleaned with `cleaning`.
std::vector<std::vector<std::string>> load_sentences(std::span<const std::string> paths,
                                                     const CleaningConfig& cleaning);

struct MeanEmbedding {
  DenseVector vector;
  bool oov = false;  // no token was in the table; vector is zero
};

MeanEmbedding embed_document_mean(const EmbeddingTable& table, std::span<const std::string> tokens);

struct Similarity {
  double value = 0.0;
  bool degenerate = false;  // a zero vector was involved
};

Similarity cosine_similarity(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string token;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Brute-force cosine search over unit-normalized rows.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingTable& table);

  // The k most similar other tokens, descending similarity, ties
  // lexicographic. Never contains `id` itself.
  std::vector<Neighbor> top_k(TokenId id, std::size_t k) const;

 private:
  const EmbeddingTable* table_;
  DenseMatrix unit_;
};

// Throws NotFoundError when `token` is not in the table.
std::vector<Neighbor> top_k_neighbors(const EmbeddingTable& table, std::string_view token, std::size_t k);

// word2vec text format: `<vocab_size> <dim>` then `token v1 ... vdim`.
void save_embeddings(const EmbeddingTable& table, const std::string& path);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace newscat
