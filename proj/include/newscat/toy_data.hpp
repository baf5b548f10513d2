#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "newscat/corpus.hpp"

namespace newscat {

// Synthetic news-like corpora from class-conditional token distributions.
// Every class owns a few concepts, each spelled by several synonyms drawn
// from a syllable inventory; documents mix class tokens with shared filler.
// Raw texts carry capitals, punctuation, accented letters and noise words so
// the cleaning step has something to do.
struct ToyCorpusSpec {
  std::size_t n_classes = 5;
  std::size_t docs_per_class = 14;
  std::size_t min_tokens = 5;
  std::size_t max_tokens = 9;
  double class_token_rate = 0.5;  // rest is filler
  double borrow_rate = 0.15;      // class tokens taken from the next class
  double noise_word_rate = 0.1;   // per document
  std::size_t topic_focus = 0;    // topics drawn per document, 0 means all
  std::uint64_t seed = 7;
};

ToyCorpusSpec toy_titles_spec();
ToyCorpusSpec toy_articles_spec();

LabeledCorpus generate_toy_corpus(const ToyCorpusSpec& spec);

struct ToyPretrainSpec {
  std::size_t n_sentences = 6000;
  std::size_t n_classes = 5;
  double class_token_rate = 0.6;
  double borrow_rate = 0.1;
  std::size_t topic_focus = 2;
  std::uint64_t seed = 3;
};

// Unlabeled sentences from the same lexicon, each built around `topic_focus` topics.
std::vector<std::string> generate_toy_pretraining(const ToyPretrainSpec& spec);

// Category names used for the toy classes.
std::vector<std::string> toy_label_names(std::size_t n_classes);

}  // namespace newscat
