#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newscat/augmentation.hpp"
#include "newscat/corpus.hpp"
#include "newscat/embeddings.hpp"
#include "newscat/evaluation.hpp"
#include "newscat/features.hpp"
#include "newscat/model.hpp"
#include "newscat/smote.hpp"
#include "newscat/vectorizers.hpp"
#include "newscat/vocabulary.hpp"

namespace newscat {

enum class Representation { bow, tfidf, word2vec };
enum class Resampler { none, augment, smote };
enum class ModelFamily { nb, logreg, gbt, lstm };

std::string_view to_string(Representation r);
std::string_view to_string(Resampler r);
std::string_view to_string(ModelFamily m);
Representation representation_from_string(std::string_view s);
Resampler resampler_from_string(std::string_view s);
ModelFamily model_family_from_string(std::string_view s);

struct PipelineSpec {
  Representation representation = Representation::word2vec;
  Resampler resampler = Resampler::none;
  ModelFamily model = ModelFamily::logreg;

  bool operator==(const PipelineSpec&) const = default;
};

// Throws ConfigError for lstm on bow/tfidf and for smote + lstm.
void validate_spec(const PipelineSpec& spec);
bool is_valid_spec(const PipelineSpec& spec);

// Concrete model for a family on a representation: naive bayes is
// multinomial on bow/tfidf and gaussian on word2vec.
ModelKind model_kind_for(const PipelineSpec& spec);

struct PipelineConfig {
  std::size_t k_folds = 5;
  std::size_t max_vocab = kDefaultMaxTokens;
  AugmentConfig augment;
  SmoteConfig smote;
  TrainConfig train;
  BootstrapConfig bootstrap;
  std::uint64_t seed = 1;
};

// Everything fitted on one training split.
struct FittedFold {
  LabeledCorpus train;  // after augmentation, before vectorizing
  Vocabulary vocab;
  std::optional<TfidfModel> tfidf;
  std::optional<Standardizer> scaler;
  bool densified = false;   // sparse features were densified (smote or gbt)
  Features train_features;  // what the model was fitted on
  std::vector<Label> train_labels;
  std::optional<TrainedModel> model;
};

struct FoldFeatures {
  Features features;
  std::size_t n_oov_docs = 0;
};

// Fits vocabulary, vectorizer, resampler, scaler and model on the rows
// `train_rows` of `corpus` only. `table` is required for word2vec features
// and for augmentation. `fold_seed` seeds augmentation, SMOTE and training.
FittedFold fit_fold(const LabeledCorpus& corpus, std::span<const std::size_t> train_rows, const PipelineSpec& spec,
                    const PipelineConfig& config, const EmbeddingTable* table, std::uint64_t fold_seed);

// Features for unseen texts in the fitted fold's space.
FoldFeatures transform_fold(const FittedFold& fold, std::span<const std::string> texts, const PipelineSpec& spec,
                            const EmbeddingTable* table);

struct CvResult {
  MetricsReport pooled;  // includes the bootstrap CI
  std::vector<MetricsReport> per_fold;
  std::vector<Label> predictions;  // out-of-fold prediction for every document
  FoldSplit split;
};

// Stratified k-fold cross-validation with all fitting confined to the
// training folds. Fold f uses seed mix_seed(config.seed, f).
CvResult cross_validate(const LabeledCorpus& corpus, const PipelineSpec& spec, const PipelineConfig& config,
                        const EmbeddingTable* table);

}  // namespace newscat
