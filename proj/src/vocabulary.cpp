#include "newscat/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <fmt/format.h>

#include "newscat/error.hpp"

namespace newscat {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find(' ', pos), text.size());
    if (end > pos) tokens.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq,
                       std::size_t max_size)
    : tokens_(std::move(tokens)), doc_freq_(std::move(doc_freq)), max_size_(max_size) {
  if (tokens_.size() != doc_freq_.size()) throw ValidationError("vocabulary: size mismatch");
  if (tokens_.size() > max_size_) throw ValidationError("vocabulary larger than its max_size");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw ValidationError(fmt::format("vocabulary: duplicate token '{}'", tokens_[i]));
    }
  }
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const std::string> texts, std::size_t max_size) {
  if (max_size < 1) throw ConfigError("vocabulary max_size must be at least 1");
  if (texts.empty()) throw EmptyCorpusError("cannot build a vocabulary from an empty corpus");

  struct Counts {
    std::size_t total = 0;
    std::size_t docs = 0;
  };
  std::unordered_map<std::string, Counts> counts;
  for (const auto& text : texts) {
    std::unordered_set<std::string> seen;
    for (auto& tok : tokenize(text)) {
      auto& c = counts[tok];
      ++c.total;
      if (seen.insert(tok).second) ++c.docs;
    }
  }

  std::vector<std::pair<std::string, Counts>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.total != b.second.total) return a.second.total > b.second.total;
    return a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);

  std::vector<std::string> tokens;
  std::vector<std::size_t> df;
  tokens.reserve(ranked.size());
  df.reserve(ranked.size());
  for (auto& [tok, c] : ranked) {
    tokens.push_back(tok);
    df.push_back(c.docs);
  }
  return Vocabulary(std::move(tokens), std::move(df), max_size);
}

Vocabulary build_vocabulary(const LabeledCorpus& corpus, std::size_t max_size) {
  const auto texts = corpus.texts();
  return build_vocabulary(std::span<const std::string>(texts), max_size);
}

std::vector<TokenId> encode(const Vocabulary& vocab, std::string_view text) {
  std::vector<TokenId> ids;
  for (const auto& tok : tokenize(text)) {
    if (auto id = vocab.find(tok)) ids.push_back(*id);
  }
  return ids;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.tokens()[i] << '\t' << vocab.doc_freq()[i] << '\n';
  }
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> tokens;
  std::vector<std::size_t> df;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError(fmt::format("{}:{}: expected token<TAB>doc_freq", path, line_no));
    }
    tokens.push_back(line.substr(0, tab));
    df.push_back(std::stoull(line.substr(tab + 1)));
  }
  const std::size_t n = tokens.size();
  return Vocabulary(std::move(tokens), std::move(df), std::max<std::size_t>(n, 1));
}

}  // namespace newscat
