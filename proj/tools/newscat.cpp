#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "newscat/augmentation.hpp"
#include "newscat/chart.hpp"
#include "newscat/cleaning.hpp"
#include "newscat/corpus.hpp"
#include "newscat/csv.hpp"
#include "newscat/embeddings.hpp"
#include "newscat/error.hpp"
#include "newscat/experiment.hpp"
#include "newscat/recommender.hpp"
#include "newscat/report.hpp"
#include "newscat/smote.hpp"
#include "newscat/toy_data.hpp"
#include "newscat/vectorizers.hpp"

namespace fs = std::filesystem;
using namespace newscat;

namespace {

struct CorpusOptions {
  std::string input;
  std::string text_column = "text";
  std::string label_column = "label";
  std::string id_column = "id";
  std::string noise_words;
  std::size_t min_class_count = 10;

  void add(CLI::App* app) {
    app->add_option("-i,--input", input, "corpus CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--text-col,--text-column", text_column, "text column name")->capture_default_str();
    app->add_option("--label-col,--label-column", label_column, "label column name")->capture_default_str();
    app->add_option("--id-col,--id-column", id_column, "id column name (row numbers if absent)")->capture_default_str();
    app->add_option("--noise-words", noise_words, "file of noise words, one per line")->check(CLI::ExistingFile);
    app->add_option("--min-class-count", min_class_count, "drop classes with fewer documents")->capture_default_str();
  }

  CleaningConfig cleaning() const {
    CleaningConfig c;
    if (!noise_words.empty()) c.noise_words = load_noise_words(noise_words);
    return c;
  }

  LabeledCorpus load_raw() const {
    auto loaded = load_corpus_csv(input, text_column, label_column, id_column);
    if (loaded.skipped_rows) spdlog::info("skipped {} rows with empty text or label", loaded.skipped_rows);
    return prune_rare_labels(loaded.corpus, min_class_count);
  }

  LabeledCorpus load_cleaned() const {
    auto cleaned = clean_corpus(load_raw(), cleaning());
    if (cleaned.dropped) spdlog::info("dropped {} documents left empty by cleaning", cleaned.dropped);
    return std::move(cleaned.corpus);
  }
};

std::uint64_t default_seed() { return seed_from_environment().value_or(1); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_file_atomic(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newscat: low-resource news classification experiments"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off")->capture_default_str();

  // clean
  CorpusOptions clean_opts;
  std::string clean_out;
  auto* clean = app.add_subcommand("clean", "normalize a labeled CSV corpus");
  clean_opts.add(clean);
  clean->add_option("-o,--output", clean_out, "cleaned CSV")->required();

  // train-embeddings
  std::vector<std::string> emb_inputs;
  std::string emb_out, emb_noise;
  SgnsConfig sgns;
  sgns.seed = default_seed();
  auto* emb = app.add_subcommand("train-embeddings", "train skip-gram embeddings on plain text");
  emb->add_option("-i,--input", emb_inputs, "plain-text files, one sentence per line")
      ->required()
      ->check(CLI::ExistingFile);
  emb->add_option("-o,--output", emb_out, "vectors in word2vec text format")->required();
  emb->add_option("--noise-words", emb_noise, "noise words removed while cleaning")->check(CLI::ExistingFile);
  emb->add_option("--dim", sgns.dim)->capture_default_str();
  emb->add_option("--window", sgns.window)->capture_default_str();
  emb->add_option("--negatives", sgns.negatives)->capture_default_str();
  emb->add_option("--epochs", sgns.epochs)->capture_default_str();
  emb->add_option("--lr", sgns.learning_rate)->capture_default_str();
  emb->add_option("--min-count", sgns.min_count)->capture_default_str();
  emb->add_option("--seed", sgns.seed)->capture_default_str();

  // augment
  CorpusOptions aug_opts;
  std::string aug_vectors, aug_out;
  AugmentConfig aug_cfg;
  aug_cfg.seed = default_seed();
  auto* aug = app.add_subcommand("augment", "write an augmented copy of a training corpus");
  aug_opts.add(aug);
  aug->add_option("-e,--embeddings", aug_vectors, "embedding file")->required()->check(CLI::ExistingFile);
  aug->add_option("-o,--output", aug_out, "augmented CSV")->required();
  aug->add_option("--copies", aug_cfg.n_copies)->capture_default_str();
  aug->add_option("--replace-prob", aug_cfg.replace_prob)->capture_default_str();
  aug->add_option("--k", aug_cfg.k_neighbors)->capture_default_str();
  aug->add_option("--min-sim", aug_cfg.min_similarity)->capture_default_str();
  aug->add_option("--seed", aug_cfg.seed)->capture_default_str();

  // smote
  CorpusOptions smote_opts;
  std::string smote_vectors, smote_out;
  SmoteConfig smote_cfg;
  smote_cfg.seed = default_seed();
  auto* smote = app.add_subcommand("smote", "oversample mean-embedding features and write them as CSV");
  smote_opts.add(smote);
  smote->add_option("-e,--embeddings", smote_vectors, "embedding file")->required()->check(CLI::ExistingFile);
  smote->add_option("-o,--output", smote_out, "feature CSV: label then one column per dimension")->required();
  smote->add_option("--smote-k", smote_cfg.k)->capture_default_str();
  smote->add_option("--seed", smote_cfg.seed)->capture_default_str();

  // evaluate / matrix share config handling
  std::string config_path, cell_rep = "word2vec", cell_res = "none", cell_model = "logreg", eval_out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::size_t> jobs_flag;
  std::optional<std::size_t> max_tokens_flag, smote_k_flag, min_class_flag;
  std::optional<std::string> out_dir_flag;
  auto* evaluate = app.add_subcommand("evaluate", "cross-validate one pipeline");
  evaluate->add_option("-c,--config", config_path, "experiment INI file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--representation", cell_rep, "bow, tfidf or word2vec")->capture_default_str();
  evaluate->add_option("--resampler", cell_res, "none, augment or smote")->capture_default_str();
  evaluate->add_option("--model", cell_model, "nb, logreg, gbt or lstm")->capture_default_str();
  evaluate->add_option("--set", overrides, "section.key=value override");
  evaluate->add_option("--seed", seed_flag);
  evaluate->add_option("-o,--output", eval_out, "metrics JSON (stdout if omitted)");

  auto* matrix = app.add_subcommand("matrix", "run the representation x resampler x model grid");
  matrix->add_option("-c,--config", config_path, "experiment INI file")->required()->check(CLI::ExistingFile);
  matrix->add_option("--set", overrides, "section.key=value override");
  matrix->add_option("--seed", seed_flag);
  matrix->add_option("-j,--jobs", jobs_flag, "cells run in parallel");
  matrix->add_option("-o,--output-dir", out_dir_flag);
  for (auto* sub : {evaluate, matrix}) {
    sub->add_option("--max-tokens", max_tokens_flag, "vocabulary cap");
    sub->add_option("--smote-k", smote_k_flag, "SMOTE neighbours");
    sub->add_option("--min-class-count", min_class_flag, "drop classes with fewer documents");
  }

  // recommend
  CorpusOptions rec_opts;
  ProfileThresholds thresholds;
  auto* rec = app.add_subcommand("recommend", "suggest a pipeline from corpus size and text length");
  rec_opts.add(rec);
  rec->add_option("--size-threshold", thresholds.size_threshold)->capture_default_str();
  rec->add_option("--length-threshold", thresholds.length_threshold)->capture_default_str();

  // chart
  CorpusOptions chart_opts;
  std::string chart_out, chart_title = "Class distribution";
  auto* chart = app.add_subcommand("chart", "SVG bar chart of class counts");
  chart_opts.add(chart);
  chart->add_option("-o,--output", chart_out, "SVG file")->required();
  chart->add_option("--title", chart_title)->capture_default_str();

  // generate-toy
  std::string toy_dir = "data";
  std::size_t toy_pretrain = 6000;
  auto* toy = app.add_subcommand("generate-toy", "write the synthetic fixture corpora");
  toy->add_option("-o,--output-dir", toy_dir)->capture_default_str();
  toy->add_option("--pretrain-sentences", toy_pretrain)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::set_pattern("[%l] %v");

  try {
    if (*clean) {
      const auto corpus = clean_opts.load_cleaned();
      save_corpus_csv(corpus, clean_out);
      fmt::print("{} documents, {} classes -> {}\n", corpus.size(), corpus.label_set().size(), clean_out);
    } else if (*emb) {
      CleaningConfig c;
      if (!emb_noise.empty()) c.noise_words = load_noise_words(emb_noise);
      const auto sentences = load_sentences(emb_inputs, c);
      const auto result = train_sgns(sentences, sgns);
      save_embeddings(result.table, emb_out);
      for (std::size_t e = 0; e < result.epoch_mean_loss.size(); ++e) {
        fmt::print("epoch {} mean loss {:.6f}\n", e + 1, result.epoch_mean_loss[e]);
      }
      fmt::print("{} tokens x {} dims -> {}\n", result.table.size(), result.table.dim(), emb_out);
    } else if (*aug) {
      const auto corpus = aug_opts.load_cleaned();
      const auto table = load_embeddings(aug_vectors);
      const auto out = augment_training_set(corpus, table, aug_cfg);
      save_corpus_csv(out, aug_out);
      fmt::print("{} -> {} documents -> {}\n", corpus.size(), out.size(), aug_out);
    } else if (*smote) {
      const auto corpus = smote_opts.load_cleaned();
      const auto table = load_embeddings(smote_vectors);
      DenseMatrix x(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(table.dim()));
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto tokens = tokenize(corpus.documents()[i].text);
        x.row(static_cast<Eigen::Index>(i)) = embed_document_mean(table, tokens).vector.transpose();
      }
      const auto res = smote_fit_resample(x, corpus.labels(), smote_cfg);
      std::ofstream out(smote_out);
      if (!out) throw IoError(fmt::format("cannot write {}", smote_out));
      std::vector<std::string> row{"label"};
      for (std::size_t d = 0; d < table.dim(); ++d) row.push_back(fmt::format("f{}", d));
      csv::write_row(out, row);
      for (Eigen::Index i = 0; i < res.features.rows(); ++i) {
        row.assign(1, corpus.label_set().name(res.labels[static_cast<std::size_t>(i)]));
        for (Eigen::Index d = 0; d < res.features.cols(); ++d) row.push_back(fmt::format("{:.17g}", res.features(i, d)));
        csv::write_row(out, row);
      }
      fmt::print("{} -> {} rows -> {}\n", corpus.size(), res.labels.size(), smote_out);
    } else if (*evaluate || *matrix) {
      if (seed_flag) overrides.push_back(fmt::format("matrix.seed={}", *seed_flag));
      if (jobs_flag) overrides.push_back(fmt::format("matrix.jobs={}", *jobs_flag));
      if (max_tokens_flag) overrides.push_back(fmt::format("matrix.max_vocab={}", *max_tokens_flag));
      if (smote_k_flag) overrides.push_back(fmt::format("smote.k={}", *smote_k_flag));
      if (min_class_flag) overrides.push_back(fmt::format("corpus.min_class_count={}", *min_class_flag));
      ExperimentSpec spec = parse_experiment_file(config_path, overrides);
      if (out_dir_flag) spec.output_dir = *out_dir_flag;
      if (*evaluate) {
        const PipelineSpec cell{representation_from_string(cell_rep), resampler_from_string(cell_res),
                                model_family_from_string(cell_model)};
        validate_spec(cell);
        const std::vector<PipelineSpec> cells{cell};
        const auto data = prepare_data(spec, needs_embeddings(cells));
        const CellResult r = run_cell(data, cell, spec.pipeline);
        const CellResult rows[] = {r};
        std::cerr << markdown_table(rows);
        auto j = cell_json(r, data.corpus.label_set());
        j["corpus"] = spec.corpus.name;
        j["seed"] = spec.pipeline.seed;
        write_text(eval_out, j.dump(2) + "\n");
        return r.report ? 0 : 1;
      }
      const auto outcome = run_matrix(spec);
      for (const auto& f : outcome.files) fmt::print("{}\n", f.string());
      if (outcome.failures) spdlog::warn("{} of {} cells failed", outcome.failures, outcome.cells.size());
      return outcome.failures == outcome.cells.size() ? 1 : 0;
    } else if (*rec) {
      const auto corpus = rec_opts.load_cleaned();
      const auto profile = profile_corpus(corpus, thresholds);
      const auto r = recommend(profile);
      fmt::print("documents: {}  median tokens: {}  profile: ({}, {})\n", profile.n_docs, profile.median_tokens,
                 to_string(profile.size_class), to_string(profile.length_class));
      fmt::print("recommendation: representation={} resampler={} model={}\n", to_string(r.spec.representation),
                 to_string(r.spec.resampler), to_string(r.spec.model));
      fmt::print("rationale: {}\n", r.rationale);
    } else if (*chart) {
      const auto corpus = chart_opts.load_raw();
      write_text(chart_out, class_distribution_svg(corpus, chart_title));
    } else if (*toy) {
      fs::create_directories(toy_dir);
      const fs::path dir(toy_dir);
      save_corpus_csv(generate_toy_corpus(toy_titles_spec()), (dir / "toy-titles.csv").string());
      save_corpus_csv(generate_toy_corpus(toy_articles_spec()), (dir / "toy-articles.csv").string());
      std::string pretrain;
      for (const auto& s : generate_toy_pretraining({.n_sentences = toy_pretrain})) pretrain += s + "\n";
      write_file_atomic(dir / "toy-pretrain.txt", pretrain);
      fmt::print("wrote toy-titles.csv, toy-articles.csv, toy-pretrain.txt to {}\n", toy_dir);
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
