#include "newscat/augmentation.hpp"

#include <fmt/format.h>

#include "newscat/error.hpp"

namespace newscat {

void AugmentConfig::validate() const {
  if (n_copies < 1) throw ConfigError("augment: n_copies must be at least 1");
  if (!(replace_prob > 0.0 && replace_prob <= 1.0)) {
    throw ConfigError("augment: replace_prob must lie in (0, 1]");
  }
  if (k_neighbors < 1) throw ConfigError("augment: k_neighbors must be at least 1");
  if (!(min_similarity >= -1.0 && min_similarity <= 1.0)) {
    throw ConfigError("augment: min_similarity must lie in [-1, 1]");
  }
}

Augmenter::Augmenter(const EmbeddingTable& table, AugmentConfig config)
    : table_(&table), config_(config), index_(table) {
  config_.validate();
}

const std::vector<std::string>& Augmenter::candidates(const std::string& token) const {
  if (auto it = cache_.find(token); it != cache_.end()) return it->second;
  std::vector<std::string> out;
  if (auto id = table_->find(token)) {
    for (auto& n : index_.top_k(*id, config_.k_neighbors)) {
      if (n.similarity >= config_.min_similarity) out.push_back(std::move(n.token));
    }
  }
  return cache_.emplace(token, std::move(out)).first->second;
}

std::vector<std::string> Augmenter::augment_sentence(std::span<const std::string> tokens,
                                                     Rng& rng) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const bool replace = rng.uniform() < config_.replace_prob;
    if (replace) {
      const auto& cands = candidates(tok);
      if (!cands.empty()) {
        out.push_back(cands[rng.index(cands.size())]);
        continue;
      }
    }
    out.push_back(tok);
  }
  return out;
}

Rng Augmenter::copy_rng(const std::string& source_id, std::size_t copy) const {
  return Rng(mix_seed(mix_seed(config_.seed, hash_string(source_id)), copy));
}

LabeledCorpus Augmenter::augment_training_set(const LabeledCorpus& train) const {
  if (train.empty()) throw EmptyCorpusError("augment: empty training set");
  std::vector<Document> docs = train.documents();
  std::vector<Label> labels = train.labels();
  docs.reserve(train.size() * (1 + config_.n_copies));
  labels.reserve(docs.capacity());

  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& src = train.documents()[i];
    const auto tokens = tokenize(src.text);
    for (std::size_t copy = 1; copy <= config_.n_copies; ++copy) {
      Rng rng = copy_rng(src.id, copy);
      const auto augmented = augment_sentence(tokens, rng);
      Document doc;
      doc.id = fmt::format("{}#aug{}", src.id, copy);
      doc.text = fmt::format("{}", fmt::join(augmented, " "));
      doc.token_count = augmented.size();
      docs.push_back(std::move(doc));
      labels.push_back(train.labels()[i]);
    }
  }
  return LabeledCorpus(std::move(docs), std::move(labels), train.label_set());
}

std::vector<std::string> augment_sentence(std::span<const std::string> tokens,
                                          const EmbeddingTable& table, const AugmentConfig& config,
                                          Rng& rng) {
  return Augmenter(table, config).augment_sentence(tokens, rng);
}

LabeledCorpus augment_training_set(const LabeledCorpus& train, const EmbeddingTable& table,
                                   const AugmentConfig& config) {
  return Augmenter(table, config).augment_training_set(train);
}

}  // namespace newscat
