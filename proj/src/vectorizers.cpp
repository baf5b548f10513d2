#include "newscat/vectorizers.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <unordered_set>

#include <fmt/format.h>

#include "newscat/error.hpp"

namespace newscat {

SparseVector bow_transform(const Vocabulary& vocab, std::string_view text) {
  std::map<TokenId, double> counts;
  for (TokenId id : encode(vocab, text)) counts[id] += 1.0;
  SparseVector v;
  v.dim = vocab.size();
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  for (const auto& [id, c] : counts) {
    v.indices.push_back(id);
    v.values.push_back(c);
  }
  return v;
}

SparseFeatures bow_transform(const Vocabulary& vocab, std::span<const std::string> texts) {
  SparseFeatures out;
  out.dim = vocab.size();
  out.rows.reserve(texts.size());
  for (const auto& t : texts) out.rows.push_back(bow_transform(vocab, t));
  return out;
}

TfidfModel::TfidfModel(Vocabulary vocab, std::vector<double> idf, std::size_t n_docs)
    : vocab_(std::move(vocab)), idf_(std::move(idf)), n_docs_(n_docs) {
  if (idf_.size() != vocab_.size()) throw ValidationError("tf-idf: idf/vocabulary size mismatch");
}

SparseVector TfidfModel::transform(std::string_view text) const {
  SparseVector v = bow_transform(vocab_, text);
  double sq = 0.0;
  for (std::size_t k = 0; k < v.indices.size(); ++k) {
    v.values[k] *= idf_[v.indices[k]];
    sq += v.values[k] * v.values[k];
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (auto& x : v.values) x /= norm;
  }
  return v;
}

SparseFeatures TfidfModel::transform(std::span<const std::string> texts) const {
  SparseFeatures out;
  out.dim = vocab_.size();
  out.rows.reserve(texts.size());
  for (const auto& t : texts) out.rows.push_back(transform(t));
  return out;
}

TfidfModel tfidf_fit(const Vocabulary& vocab, std::span<const std::string> training_texts) {
  if (training_texts.empty()) throw EmptyCorpusError("tf-idf fit on an empty corpus");
  std::vector<std::size_t> df(vocab.size(), 0);
  for (const auto& text : training_texts) {
    std::unordered_set<TokenId> seen;
    for (TokenId id : encode(vocab, text)) {
      if (seen.insert(id).second) ++df[id];
    }
  }
  const double n = static_cast<double>(training_texts.size());
  std::vector<double> idf(vocab.size());
  for (std::size_t t = 0; t < idf.size(); ++t) {
    idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;
  }
  return TfidfModel(vocab, std::move(idf), training_texts.size());
}

void save_tfidf(const TfidfModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# n_docs " << model.n_docs() << '\n' << std::setprecision(17);
  for (std::size_t t = 0; t < model.idf().size(); ++t) {
    out << model.vocab().token(static_cast<TokenId>(t)) << '\t' << model.idf()[t] << '\n';
  }
}

TfidfModel load_tfidf(const Vocabulary& vocab, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::size_t n_docs = 0;
  std::vector<double> idf(vocab.size(), 0.0);
  std::vector<bool> seen(vocab.size(), false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# n_docs ", 0) == 0) n_docs = std::stoull(line.substr(9));
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ValidationError(path + ": expected token<TAB>idf");
    const auto id = vocab.find(line.substr(0, tab));
    if (!id) throw ValidationError(fmt::format("{}: token '{}' not in vocabulary", path, line.substr(0, tab)));
    idf[*id] = std::stod(line.substr(tab + 1));
    seen[*id] = true;
  }
  for (std::size_t t = 0; t < seen.size(); ++t) {
    if (!seen[t]) throw ValidationError(fmt::format("{}: no idf for '{}'", path, vocab.tokens()[t]));
  }
  return TfidfModel(vocab, std::move(idf), n_docs);
}

}  // namespace newscat
