#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "newscat/corpus.hpp"

namespace newscat {

struct CleaningConfig {
  std::set<std::string> noise_words;  // lowercase, non-empty
  bool keep_digits = true;

  // Throws ConfigError if a noise word is empty or not lowercase.
  void validate() const;
};

// One lowercase token per line; blank lines and '#' comments ignored.
std::set<std::string> load_noise_words(const std::string& path);

// Cleaning steps, in order:
//   1. NFKD-decompose and drop everything outside ASCII
//   2. drop characters that are not alphanumeric or whitespace
//   3. drop single-character tokens
//   4. drop noise words (compared case-insensitively)
//   5. collapse whitespace to single spaces, trim
//   6. lowercase
std::string clean_text(std::string_view raw, const CleaningConfig& config);

// Individual steps, exposed for testing.
std::string to_ascii(std::string_view utf8);
std::string strip_special_characters(std::string_view ascii, bool keep_digits);

struct CleanResult {
  LabeledCorpus corpus;
  std::size_t dropped = 0;  // documents whose cleaned text was empty
};

// Also fills Document::token_count.
CleanResult clean_corpus(const LabeledCorpus& corpus, const CleaningConfig& config);

}  // namespace newscat
