#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "newscat/cleaning.hpp"
#include "newscat/corpus.hpp"
#include "newscat/embeddings.hpp"
#include "newscat/pipeline.hpp"
#include "newscat/report.hpp"

namespace newscat {

struct CorpusSource {
  std::string name;
  std::filesystem::path path;
  std::string text_column = "text";
  std::string label_column = "label";
  std::string id_column = "id";
  std::size_t min_class_count = 10;
};

struct EmbeddingSource {
  std::optional<std::filesystem::path> file;     // pretrained vectors, word2vec text format
  std::vector<std::filesystem::path> pretrain;  // plain-text corpora to train on otherwise
  SgnsConfig sgns;
};

// One experiment matrix: a corpus, the representation x resampler x model
// grid and every module setting.
struct ExperimentSpec {
  CorpusSource corpus;
  std::optional<std::filesystem::path> noise_words;
  CleaningConfig cleaning;
  std::vector<Representation> representations{Representation::bow, Representation::tfidf,
                                              Representation::word2vec};
  std::vector<Resampler> resamplers{Resampler::none};
  std::vector<ModelFamily> models{ModelFamily::nb, ModelFamily::logreg, ModelFamily::gbt, ModelFamily::lstm};
  EmbeddingSource embeddings;
  PipelineConfig pipeline;
  std::filesystem::path output_dir = "results";
  std::size_t jobs = 1;
};

// INI file, one section per module ([corpus], [cleaning], [matrix],
// [embeddings], [augment], [smote], [nb], [logreg], [gbt], [lstm],
// [bootstrap], [output]). `overrides` are `section.key=value` strings
// applied on top of the file. Relative paths resolve against the file's
// directory. Unknown sections or keys are a ConfigError.
ExperimentSpec parse_experiment_file(const std::filesystem::path& path,
                                     const std::vector<std::string>& overrides = {});
ExperimentSpec parse_experiment_string(const std::string& ini, const std::filesystem::path& base_dir,
                                       const std::vector<std::string>& overrides = {});

// Seed from NEWSCAT_SEED when set and parseable.
std::optional<std::uint64_t> seed_from_environment();

// Cells of the grid in table order (resampler, representation, model),
// dropping unsupported combinations.
std::vector<PipelineSpec> matrix_cells(const ExperimentSpec& spec);

struct PreparedData {
  LabeledCorpus corpus;  // cleaned
  std::optional<EmbeddingTable> table;
  std::size_t dropped_documents = 0;
};

// Loads, prunes and cleans the corpus and loads or trains embeddings when a
// cell needs them.
PreparedData prepare_data(const ExperimentSpec& spec, bool need_embeddings);
bool needs_embeddings(std::span<const PipelineSpec> cells);

CellResult run_cell(const PreparedData& data, const PipelineSpec& cell, const PipelineConfig& config);

struct MatrixOutcome {
  std::vector<CellResult> cells;
  std::vector<std::filesystem::path> files;
  std::size_t failures = 0;
};

// Runs every cell on up to spec.jobs threads and writes, into output_dir,
// one JSON per cell plus a Markdown table and CSV per resampler. Output is
// independent of the job count.
MatrixOutcome run_matrix(const ExperimentSpec& spec);

// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace newscat
