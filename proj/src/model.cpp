#include "newscat/model.hpp"

#include <fstream>

#include <fmt/format.h>

#include "newscat/error.hpp"
#include "newscat/numeric.hpp"

namespace newscat {

namespace {

constexpr std::string_view kFormat = "newscat-model";
constexpr int kVersion = 1;

constexpr std::pair<ModelKind, std::string_view> kKindNames[] = {
    {ModelKind::nb_multinomial, "nb_multinomial"},
    {ModelKind::nb_gaussian, "nb_gaussian"},
    {ModelKind::logreg, "logreg"},
    {ModelKind::gbt, "gbt"},
    {ModelKind::lstm, "lstm"},
};

void check_labels(std::span<const Label> y, const LabelSet& labels, std::size_t rows) {
  if (rows != y.size()) throw ValidationError("train: features and labels differ in length");
  if (y.empty()) throw EmptyCorpusError("train: no training rows");
  for (Label l : y) {
    if (l < 0 || static_cast<std::size_t>(l) >= labels.size()) {
      throw ValidationError(fmt::format("train: label {} outside the label set", l));
    }
  }
}

const DenseMatrix& require_dense(const Features& x, std::string_view who) {
  const auto* dense = std::get_if<DenseMatrix>(&x);
  if (!dense) {
    throw ContractError(fmt::format("{}: expects dense features, got {}", who, to_string(contract_of(x))));
  }
  return *dense;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError(fmt::format("unknown model kind '{}'", name));
}

void TrainConfig::validate() const {
  nb.validate();
  logreg.validate();
  gbt.validate();
  lstm.validate();
}

TrainedModel::TrainedModel(ModelKind kind, FeatureContract contract, LabelSet labels, Parameters params)
    : kind_(kind), contract_(contract), labels_(std::move(labels)), params_(std::move(params)) {}

DenseMatrix TrainedModel::predict_proba(const Features& x) const {
  if (contract_of(x) != contract_) {
    throw ContractError(fmt::format("{} model expects {} features, got {}", to_string(kind_),
                                    to_string(contract_), to_string(contract_of(x))));
  }
  return std::visit(
      [&x](const auto& m) -> DenseMatrix {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MultinomialNb> || std::is_same_v<M, LogisticRegression>) {
          return m.predict_proba(x);
        } else if constexpr (std::is_same_v<M, LstmClassifier>) {
          return m.predict_proba(std::get<SequenceFeatures>(x));
        } else {
          return m.predict_proba(std::get<DenseMatrix>(x));
        }
      },
      params_);
}

std::vector<Label> TrainedModel::predict(const Features& x) const { return argmax_rows(predict_proba(x)); }

TrainedModel nb_train(const Features& x, std::span<const Label> y, const LabelSet& labels, NbVariant variant,
                      const TrainConfig& config) {
  config.nb.validate();
  check_labels(y, labels, num_rows(x));
  check_finite(x, "naive bayes features");
  if (variant == NbVariant::multinomial) {
    return {ModelKind::nb_multinomial, contract_of(x), labels, MultinomialNb::fit(x, y, labels.size(), config.nb)};
  }
  const auto& dense = require_dense(x, "gaussian naive bayes");
  return {ModelKind::nb_gaussian, FeatureContract::dense, labels, GaussianNb::fit(dense, y, labels.size(), config.nb)};
}

TrainedModel logreg_train(const Features& x, std::span<const Label> y, const LabelSet& labels,
                          const TrainConfig& config) {
  check_labels(y, labels, num_rows(x));
  check_finite(x, "logreg features");
  return {ModelKind::logreg, contract_of(x), labels,
          LogisticRegression::fit(x, y, labels.size(), config.logreg)};
}

TrainedModel gbt_train(const Features& x, std::span<const Label> y, const LabelSet& labels,
                       const TrainConfig& config) {
  check_labels(y, labels, num_rows(x));
  const auto& dense = require_dense(x, "gbt");
  return {ModelKind::gbt, FeatureContract::dense, labels,
          GradientBoostedTrees::fit(dense, y, labels.size(), config.gbt)};
}

TrainedModel lstm_train(const SequenceFeatures& x, std::span<const Label> y, const LabelSet& labels,
                        const EmbeddingTable& table, const TrainConfig& config) {
  if (x.sequences.empty()) throw EmptyCorpusError("lstm: no training sequences");
  check_labels(y, labels, x.sequences.size());
  return {ModelKind::lstm, FeatureContract::token_sequence, labels,
          LstmClassifier::fit(x, y, labels.size(), table.vectors(), config.lstm, config.seed)};
}

void save_model(const TrainedModel& model, const std::string& path) {
  nlohmann::json params = std::visit([](const auto& m) { return m.to_json(); }, model.parameters());
  const nlohmann::json doc = {{"format", kFormat},
                              {"version", kVersion},
                              {"kind", to_string(model.kind())},
                              {"feature_contract", to_string(model.feature_contract())},
                              {"labels", model.label_set().names()},
                              {"params", std::move(params)}};
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write model file {}", path));
  out << doc.dump() << '\n';
  if (!out) throw IoError(fmt::format("failed writing model file {}", path));
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open model file {}", path));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: not a model file ({})", path, e.what()));
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw ValidationError(fmt::format("{}: not a model file", path));
    if (doc.at("version").get<int>() != kVersion) {
      throw ValidationError(fmt::format("{}: unsupported model version {}", path, doc.at("version").dump()));
    }
    const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const FeatureContract contract = feature_contract_from_string(doc.at("feature_contract").get<std::string>());
    LabelSet labels(doc.at("labels").get<std::vector<std::string>>());
    const auto& p = doc.at("params");
    switch (kind) {
      case ModelKind::nb_multinomial:
        return {kind, contract, std::move(labels), MultinomialNb::from_json(p)};
      case ModelKind::nb_gaussian:
        return {kind, contract, std::move(labels), GaussianNb::from_json(p)};
      case ModelKind::logreg:
        return {kind, contract, std::move(labels), LogisticRegression::from_json(p)};
      case ModelKind::gbt:
        return {kind, contract, std::move(labels), GradientBoostedTrees::from_json(p)};
      case ModelKind::lstm:
        return {kind, contract, std::move(labels), LstmClassifier::from_json(p)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: malformed model file ({})", path, e.what()));
  }
  throw ValidationError(fmt::format("{}: unknown model kind", path));
}

TrainedModel load_model(const std::string& path, FeatureContract expected) {
  TrainedModel model = load_model(path);
  if (model.feature_contract() != expected) {
    throw ContractError(fmt::format("{}: model expects {} features, caller provides {}", path,
                                    to_string(model.feature_contract()), to_string(expected)));
  }
  return model;
}

}  // namespace newscat
