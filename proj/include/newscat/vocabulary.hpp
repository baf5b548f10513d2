#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newscat/corpus.hpp"

namespace newscat {

using TokenId = std::uint32_t;

inline constexpr std::size_t kDefaultMaxTokens = 20000;

// Splits cleaned text on spaces; empty pieces are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Frequency-ranked token list with document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq,
             std::size_t max_size);

  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t max_size() const { return max_size_; }

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && doc_freq_ == other.doc_freq_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, TokenId> index_;
  std::size_t max_size_ = kDefaultMaxTokens;
};

// Keeps the `max_size` most frequent tokens (total occurrences), ties broken
// lexicographically.
Vocabulary build_vocabulary(std::span<const std::string> texts, std::size_t max_size);
Vocabulary build_vocabulary(const LabeledCorpus& corpus, std::size_t max_size);

// Out-of-vocabulary tokens are dropped.
std::vector<TokenId> encode(const Vocabulary& vocab, std::string_view text);

// `token<TAB>doc_freq` per line, rank order.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

}  // namespace newscat
