#pragma once

#include <string>
#include <string_view>

#include "newscat/corpus.hpp"
#include "newscat/pipeline.hpp"

namespace newscat {

enum class SizeClass { small, large };
enum class LengthClass { short_text, long_text };

std::string_view to_string(SizeClass s);
std::string_view to_string(LengthClass l);

struct ProfileThresholds {
  std::size_t size_threshold = 300;   // documents
  double length_threshold = 30.0;     // median tokens per document
};

struct DatasetProfile {
  std::size_t n_docs = 0;
  double median_tokens = 0.0;
  SizeClass size_class = SizeClass::small;
  LengthClass length_class = LengthClass::short_text;
};

DatasetProfile make_profile(std::size_t n_docs, double median_tokens, const ProfileThresholds& thresholds = {});

// Uses Document::token_count, so pass a cleaned corpus.
DatasetProfile profile_corpus(const LabeledCorpus& corpus, const ProfileThresholds& thresholds = {});

struct Recommendation {
  PipelineSpec spec;  // representation is always word2vec
  std::string rationale;
  bool outside_evidence = false;
};

Recommendation recommend(const DatasetProfile& profile);

}  // namespace newscat
