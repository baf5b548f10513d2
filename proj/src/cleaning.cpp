#include "newscat/cleaning.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "newscat/error.hpp"

namespace newscat {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

}  // namespace

void CleaningConfig::validate() const {
  for (const auto& w : noise_words) {
    if (w.empty()) throw ConfigError("noise word list contains an empty entry");
    if (w != lowercase(w)) throw ConfigError(fmt::format("noise word '{}' is not lowercase", w));
  }
}

std::set<std::string> load_noise_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open noise word list '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string word;
    if (fields >> word) words.insert(lowercase(word));
  }
  return words;
}

std::string to_ascii(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkd = icu::Normalizer2::getNFKDInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFKD unavailable: ") + u_errorName(status));

  const icu::UnicodeString source =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const icu::UnicodeString decomposed = nfkd->normalize(source, status);
  if (U_FAILURE(status)) throw Error(std::string("NFKD normalization failed: ") + u_errorName(status));

  std::string out;
  out.reserve(static_cast<std::size_t>(decomposed.length()));
  for (int32_t i = 0; i < decomposed.length(); ++i) {
    const char16_t unit = decomposed.charAt(i);
    if (unit < 0x80) out.push_back(static_cast<char>(unit));
  }
  return out;
}

std::string strip_special_characters(std::string_view ascii, bool keep_digits) {
  std::string out;
  out.reserve(ascii.size());
  for (char c : ascii) {
    if (is_ascii_space(c)) {
      out.push_back(' ');
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (keep_digits && c >= '0' && c <= '9')) {
      out.push_back(c);
    }
  }
  return out;
}

std::string clean_text(std::string_view raw, const CleaningConfig& config) {
  const std::string stripped = strip_special_characters(to_ascii(raw), config.keep_digits);

  std::string out;
  out.reserve(stripped.size());
  std::size_t pos = 0;
  while (pos < stripped.size()) {
    const std::size_t start = stripped.find_first_not_of(' ', pos);
    if (start == std::string::npos) break;
    std::size_t end = stripped.find(' ', start);
    if (end == std::string::npos) end = stripped.size();
    pos = end;

    const std::string_view token(stripped.data() + start, end - start);
    if (token.size() < 2) continue;
    const std::string lowered = lowercase(token);
    if (config.noise_words.count(lowered)) continue;
    if (!out.empty()) out.push_back(' ');
    out += lowered;
  }
  return out;
}

CleanResult clean_corpus(const LabeledCorpus& corpus, const CleaningConfig& config) {
  config.validate();
  std::vector<Document> docs;
  std::vector<Label> labels;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    Document doc = corpus.documents()[i];
    doc.text = clean_text(doc.text, config);
    if (doc.text.empty()) {
      ++dropped;
      continue;
    }
    doc.token_count = static_cast<std::size_t>(std::count(doc.text.begin(), doc.text.end(), ' ')) + 1;
    docs.push_back(std::move(doc));
    labels.push_back(corpus.labels()[i]);
  }
  if (docs.empty()) throw EmptyCorpusError("every document cleaned to empty text");
  return {LabeledCorpus(std::move(docs), std::move(labels), corpus.label_set()), dropped};
}

}  // namespace newscat
