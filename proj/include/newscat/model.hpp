#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "newscat/corpus.hpp"
#include "newscat/embeddings.hpp"
#include "newscat/features.hpp"
#include "newscat/gbt.hpp"
#include "newscat/logreg.hpp"
#include "newscat/lstm.hpp"
#include "newscat/naive_bayes.hpp"

namespace newscat {

enum class ModelKind { nb_multinomial, nb_gaussian, logreg, gbt, lstm };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct TrainConfig {
  NbConfig nb;
  LogregConfig logreg;
  GbtConfig gbt;
  LstmConfig lstm;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class NbVariant { multinomial, gaussian };

// A fitted classifier with its label set and the feature shape it accepts.
class TrainedModel {
 public:
  using Parameters = std::variant<MultinomialNb, GaussianNb, LogisticRegression, GradientBoostedTrees, LstmClassifier>;

  TrainedModel(ModelKind kind, FeatureContract contract, LabelSet labels, Parameters params);

  ModelKind kind() const { return kind_; }
  FeatureContract feature_contract() const { return contract_; }
  const LabelSet& label_set() const { return labels_; }
  const Parameters& parameters() const { return params_; }

  // Rows sum to 1; throws ContractError when `x` has the wrong shape.
  DenseMatrix predict_proba(const Features& x) const;
  // argmax of predict_proba, ties to the lowest class id.
  std::vector<Label> predict(const Features& x) const;

 private:
  ModelKind kind_;
  FeatureContract contract_;
  LabelSet labels_;
  Parameters params_;
};

TrainedModel nb_train(const Features& x, std::span<const Label> y, const LabelSet& labels, NbVariant variant,
                      const TrainConfig& config);
TrainedModel logreg_train(const Features& x, std::span<const Label> y, const LabelSet& labels,
                          const TrainConfig& config);
TrainedModel gbt_train(const Features& x, std::span<const Label> y, const LabelSet& labels,
                       const TrainConfig& config);
TrainedModel lstm_train(const SequenceFeatures& x, std::span<const Label> y, const LabelSet& labels,
                        const EmbeddingTable& table, const TrainConfig& config);

// JSON container {"format", "version", "kind", "feature_contract", "labels", "params"}.
void save_model(const TrainedModel& model, const std::string& path);
// Throws ContractError if the stored feature contract differs from `expected`.
TrainedModel load_model(const std::string& path, FeatureContract expected);
TrainedModel load_model(const std::string& path);

}  // namespace newscat
