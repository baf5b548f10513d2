#include "newscat/pipeline.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "newscat/error.hpp"
#include "newscat/random.hpp"

namespace newscat {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::pair<E, std::string_view> (&names)[N], std::string_view what) {
  for (const auto& [e, name] : names) {
    if (name == s) return e;
  }
  throw ConfigError(fmt::format("unknown {} '{}'", what, s));
}

template <typename E, std::size_t N>
std::string_view enum_name(E e, const std::pair<E, std::string_view> (&names)[N]) {
  for (const auto& [v, name] : names) {
    if (v == e) return name;
  }
  return "unknown";
}

constexpr std::pair<Representation, std::string_view> kRepresentations[] = {
    {Representation::bow, "bow"}, {Representation::tfidf, "tfidf"}, {Representation::word2vec, "word2vec"}};
constexpr std::pair<Resampler, std::string_view> kResamplers[] = {
    {Resampler::none, "none"}, {Resampler::augment, "augment"}, {Resampler::smote, "smote"}};
constexpr std::pair<ModelFamily, std::string_view> kModels[] = {
    {ModelFamily::nb, "nb"}, {ModelFamily::logreg, "logreg"}, {ModelFamily::gbt, "gbt"}, {ModelFamily::lstm, "lstm"}};

const EmbeddingTable& need_table(const EmbeddingTable* table, std::string_view why) {
  if (!table) throw ConfigError(fmt::format("{} needs an embedding table", why));
  return *table;
}

SequenceFeatures encode_sequences(const EmbeddingTable& table, std::span<const std::string> texts) {
  SequenceFeatures out;
  out.sequences.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<std::uint32_t> seq;
    for (const auto& tok : tokenize(text)) {
      if (auto id = table.find(tok)) seq.push_back(*id);
    }
    out.sequences.push_back(std::move(seq));
  }
  return out;
}

DenseMatrix mean_embeddings(const EmbeddingTable& table, std::span<const std::string> texts, std::size_t& n_oov) {
  DenseMatrix out(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(table.dim()));
  n_oov = 0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto tokens = tokenize(texts[i]);
    auto mean = embed_document_mean(table, tokens);
    if (mean.oov) ++n_oov;
    out.row(static_cast<Eigen::Index>(i)) = mean.vector.transpose();
  }
  return out;
}

}  // namespace

std::string_view to_string(Representation r) { return enum_name(r, kRepresentations); }
std::string_view to_string(Resampler r) { return enum_name(r, kResamplers); }
std::string_view to_string(ModelFamily m) { return enum_name(m, kModels); }
Representation representation_from_string(std::string_view s) {
  return parse_enum(s, kRepresentations, "representation");
}
Resampler resampler_from_string(std::string_view s) { return parse_enum(s, kResamplers, "resampler"); }
ModelFamily model_family_from_string(std::string_view s) { return parse_enum(s, kModels, "model"); }

void validate_spec(const PipelineSpec& spec) {
  if (spec.model != ModelFamily::lstm) return;
  if (spec.representation != Representation::word2vec) {
    throw ConfigError(fmt::format("lstm needs token sequences; {} features are not supported",
                                  to_string(spec.representation)));
  }
  if (spec.resampler == Resampler::smote) {
    throw ConfigError("smote produces feature vectors, not token sequences; smote + lstm is not supported");
  }
}

bool is_valid_spec(const PipelineSpec& spec) {
  try {
    validate_spec(spec);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

ModelKind model_kind_for(const PipelineSpec& spec) {
  switch (spec.model) {
    case ModelFamily::nb:
      return spec.representation == Representation::word2vec ? ModelKind::nb_gaussian : ModelKind::nb_multinomial;
    case ModelFamily::logreg:
      return ModelKind::logreg;
    case ModelFamily::gbt:
      return ModelKind::gbt;
    case ModelFamily::lstm:
      return ModelKind::lstm;
  }
  return ModelKind::logreg;
}

FittedFold fit_fold(const LabeledCorpus& corpus, std::span<const std::size_t> train_rows, const PipelineSpec& spec,
                    const PipelineConfig& config, const EmbeddingTable* table, std::uint64_t fold_seed) {
  validate_spec(spec);
  FittedFold fold;
  fold.train = corpus.subset(train_rows);
  if (spec.resampler == Resampler::augment) {
    AugmentConfig aug = config.augment;
    aug.seed = mix_seed(fold_seed, 1);
    fold.train = augment_training_set(fold.train, need_table(table, "augmentation"), aug);
  }
  const std::vector<std::string> texts = fold.train.texts();
  fold.train_labels = fold.train.labels();

  switch (spec.representation) {
    case Representation::bow:
      fold.vocab = build_vocabulary(texts, config.max_vocab);
      fold.train_features = bow_transform(fold.vocab, texts);
      break;
    case Representation::tfidf:
      fold.vocab = build_vocabulary(texts, config.max_vocab);
      fold.tfidf = tfidf_fit(fold.vocab, texts);
      fold.train_features = fold.tfidf->transform(texts);
      break;
    case Representation::word2vec: {
      const auto& t = need_table(table, "word2vec features");
      if (spec.model == ModelFamily::lstm) {
        fold.train_features = encode_sequences(t, texts);
      } else {
        std::size_t n_oov = 0;
        fold.train_features = mean_embeddings(t, texts, n_oov);
      }
      break;
    }
  }

  if (spec.resampler == Resampler::smote || spec.model == ModelFamily::gbt) {
    if (auto* sparse = std::get_if<SparseFeatures>(&fold.train_features)) {
      fold.train_features = densify(*sparse);
      fold.densified = true;
    }
  }
  if (spec.resampler == Resampler::smote) {
    SmoteConfig sm = config.smote;
    sm.seed = mix_seed(fold_seed, 2);
    auto res = smote_fit_resample(std::get<DenseMatrix>(fold.train_features), fold.train_labels, sm);
    fold.train_features = std::move(res.features);
    fold.train_labels = std::move(res.labels);
  }
  if (spec.representation == Representation::word2vec && spec.model != ModelFamily::lstm) {
    auto& dense = std::get<DenseMatrix>(fold.train_features);
    fold.scaler = Standardizer::fit(dense);
    dense = fold.scaler->transform(dense);
  }

  TrainConfig train = config.train;
  train.seed = mix_seed(fold_seed, 3);
  const LabelSet& labels = corpus.label_set();
  switch (spec.model) {
    case ModelFamily::nb:
      fold.model = nb_train(fold.train_features, fold.train_labels, labels,
                            spec.representation == Representation::word2vec ? NbVariant::gaussian
                                                                           : NbVariant::multinomial,
                            train);
      break;
    case ModelFamily::logreg:
      fold.model = logreg_train(fold.train_features, fold.train_labels, labels, train);
      break;
    case ModelFamily::gbt:
      fold.model = gbt_train(fold.train_features, fold.train_labels, labels, train);
      break;
    case ModelFamily::lstm:
      fold.model = lstm_train(std::get<SequenceFeatures>(fold.train_features), fold.train_labels, labels,
                              need_table(table, "lstm"), train);
      break;
  }
  return fold;
}

FoldFeatures transform_fold(const FittedFold& fold, std::span<const std::string> texts, const PipelineSpec& spec,
                            const EmbeddingTable* table) {
  FoldFeatures out;
  switch (spec.representation) {
    case Representation::bow:
    case Representation::tfidf: {
      SparseFeatures sparse = fold.tfidf ? fold.tfidf->transform(texts) : bow_transform(fold.vocab, texts);
      for (const auto& row : sparse.rows) out.n_oov_docs += row.empty() ? 1 : 0;
      if (fold.densified) {
        out.features = densify(sparse);
      } else {
        out.features = std::move(sparse);
      }
      break;
    }
    case Representation::word2vec: {
      const auto& t = need_table(table, "word2vec features");
      if (spec.model == ModelFamily::lstm) {
        auto seq = encode_sequences(t, texts);
        for (const auto& s : seq.sequences) out.n_oov_docs += s.empty() ? 1 : 0;
        out.features = std::move(seq);
      } else {
        DenseMatrix dense = mean_embeddings(t, texts, out.n_oov_docs);
        out.features = fold.scaler ? fold.scaler->transform(dense) : std::move(dense);
      }
      break;
    }
  }
  return out;
}

CvResult cross_validate(const LabeledCorpus& corpus, const PipelineSpec& spec, const PipelineConfig& config,
                        const EmbeddingTable* table) {
  validate_spec(spec);
  if (corpus.empty()) throw EmptyCorpusError("cross-validation: empty corpus");
  CvResult result;
  result.split = stratified_kfold(corpus.labels(), config.k_folds, config.seed);
  result.predictions.assign(corpus.size(), -1);
  const std::size_t n_classes = corpus.label_set().size();
  std::size_t n_oov = 0;

  for (std::size_t f = 0; f < result.split.k; ++f) {
    const auto& test_rows = result.split.folds[f];
    try {
      const auto train_rows = result.split.train_indices(f);
      const FittedFold fold = fit_fold(corpus, train_rows, spec, config, table, mix_seed(config.seed, f));
      std::vector<std::string> test_texts;
      std::vector<Label> test_labels;
      for (std::size_t i : test_rows) {
        test_texts.push_back(corpus.documents()[i].text);
        test_labels.push_back(corpus.labels()[i]);
      }
      const FoldFeatures test = transform_fold(fold, test_texts, spec, table);
      const std::vector<Label> pred = fold.model->predict(test.features);
      for (std::size_t j = 0; j < test_rows.size(); ++j) result.predictions[test_rows[j]] = pred[j];
      MetricsReport fold_report = confusion_and_metrics(test_labels, pred, n_classes);
      fold_report.n_oov_docs = test.n_oov_docs;
      n_oov += test.n_oov_docs;
      result.per_fold.push_back(std::move(fold_report));
      spdlog::debug("{}/{}/{} fold {}: macro-F1 {:.4f}", to_string(spec.representation), to_string(spec.resampler),
                    to_string(spec.model), f, result.per_fold.back().f1_macro);
    } catch (const Error& e) {
      throw Error(fmt::format("fold {}: {}", f, e.what()));
    }
  }

  result.pooled = confusion_and_metrics(corpus.labels(), result.predictions, n_classes);
  result.pooled.n_oov_docs = n_oov;
  BootstrapConfig boot = config.bootstrap;
  boot.seed = mix_seed(config.seed, 0xB007);
  result.pooled.f1_ci = bootstrap_f1_ci(corpus.labels(), result.predictions, n_classes, boot);
  return result;
}

}  // namespace newscat
