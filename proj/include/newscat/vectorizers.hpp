#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newscat/features.hpp"
#include "newscat/vocabulary.hpp"

namespace newscat {

// Raw token counts over `vocab`; unknown tokens ignored.
SparseVector bow_transform(const Vocabulary& vocab, std::string_view text);
SparseFeatures bow_transform(const Vocabulary& vocab, std::span<const std::string> texts);

// Smoothed inverse document frequency:
//   idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1
// Document vectors are count * idf, L2-normalized when non-zero.
class TfidfModel {
 public:
  TfidfModel() = default;
  TfidfModel(Vocabulary vocab, std::vector<double> idf, std::size_t n_docs);

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t n_docs() const { return n_docs_; }

  SparseVector transform(std::string_view text) const;
  SparseFeatures transform(std::span<const std::string> texts) const;

  bool operator==(const TfidfModel&) const = default;

 private:
  Vocabulary vocab_;
  std::vector<double> idf_;
  std::size_t n_docs_ = 0;
};

// Document frequencies are counted over `training_texts`.
TfidfModel tfidf_fit(const Vocabulary& vocab, std::span<const std::string> training_texts);

inline SparseVector tfidf_transform(const TfidfModel& model, std::string_view text) {
  return model.transform(text);
}

// `# n_docs N` header, then `token<TAB>idf` per line in vocabulary order.
void save_tfidf(const TfidfModel& model, const std::string& path);
TfidfModel load_tfidf(const Vocabulary& vocab, const std::string& path);

}  // namespace newscat
