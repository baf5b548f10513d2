#include "newscat/recommender.hpp"

#include <algorithm>
#include <vector>

#include "newscat/error.hpp"

namespace newscat {

std::string_view to_string(SizeClass s) { return s == SizeClass::large ? "large" : "small"; }
std::string_view to_string(LengthClass l) { return l == LengthClass::long_text ? "long" : "short"; }

DatasetProfile make_profile(std::size_t n_docs, double median_tokens, const ProfileThresholds& thresholds) {
  DatasetProfile p;
  p.n_docs = n_docs;
  p.median_tokens = median_tokens;
  p.size_class = n_docs >= thresholds.size_threshold ? SizeClass::large : SizeClass::small;
  p.length_class = median_tokens >= thresholds.length_threshold ? LengthClass::long_text : LengthClass::short_text;
  return p;
}

DatasetProfile profile_corpus(const LabeledCorpus& corpus, const ProfileThresholds& thresholds) {
  if (corpus.empty()) throw EmptyCorpusError("profile: empty corpus");
  std::vector<std::size_t> lengths;
  lengths.reserve(corpus.size());
  for (const auto& d : corpus.documents()) lengths.push_back(d.token_count);
  std::sort(lengths.begin(), lengths.end());
  const std::size_t n = lengths.size();
  const double median = n % 2 ? static_cast<double>(lengths[n / 2])
                              : 0.5 * static_cast<double>(lengths[n / 2 - 1] + lengths[n / 2]);
  return make_profile(n, median, thresholds);
}

Recommendation recommend(const DatasetProfile& profile) {
  Recommendation r;
  r.spec.representation = Representation::word2vec;
  const bool large = profile.size_class == SizeClass::large;
  const bool long_text = profile.length_class == LengthClass::long_text;
  if (large && long_text) {
    r.spec.resampler = Resampler::augment;
    r.spec.model = ModelFamily::lstm;
    r.rationale = "large corpus of long texts: embedding-neighbour augmentation with an LSTM";
  } else if (large) {
    r.spec.resampler = Resampler::smote;
    r.spec.model = ModelFamily::gbt;
    r.rationale = "large corpus of short texts: SMOTE with gradient-boosted trees";
  } else if (!long_text) {
    r.spec.resampler = Resampler::augment;
    r.spec.model = ModelFamily::gbt;
    r.rationale = "small corpus of short texts: embedding-neighbour augmentation with gradient-boosted trees";
  } else {
    r.spec.resampler = Resampler::augment;
    r.spec.model = ModelFamily::gbt;
    r.outside_evidence = true;
    r.rationale =
        "small corpus of long texts: no benchmark evidence for this shape; defaulting to augmentation with "
        "gradient-boosted trees (outside evidence)";
  }
  return r;
}

}  // namespace newscat
