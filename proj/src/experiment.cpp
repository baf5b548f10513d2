#include "newscat/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "newscat/error.hpp"

namespace newscat {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"corpus", {"name", "path", "text_column", "label_column", "id_column", "min_class_count"}},
    {"cleaning", {"noise_words", "keep_digits"}},
    {"matrix", {"representations", "resamplers", "models", "folds", "seed", "jobs", "max_vocab"}},
    {"embeddings", {"file", "pretrain", "dim", "window", "negatives", "epochs", "learning_rate", "min_count", "seed"}},
    {"augment", {"copies", "replace_prob", "k", "min_similarity"}},
    {"smote", {"k", "target_count"}},
    {"nb", {"alpha", "var_floor"}},
    {"logreg", {"learning_rate", "l2", "max_iters", "tol"}},
    {"gbt", {"n_rounds", "max_depth", "learning_rate", "lambda", "min_child_weight"}},
    {"lstm", {"hidden_dim", "epochs", "learning_rate", "clip_norm", "max_seq_len"}},
    {"bootstrap", {"resamples", "level"}},
    {"output", {"dir"}},
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, cur.find_last_not_of(" \t") - b + 1));
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return out;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, fs::path base) : tree_(tree), base_(std::move(base)) {}

  template <typename T>
  void get(const std::string& key, T& out) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (*v == "true" || *v == "1" || *v == "yes") out = true;
        else if (*v == "false" || *v == "0" || *v == "no") out = false;
        else throw std::invalid_argument("not a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        out = *v;
      } else if constexpr (std::is_floating_point_v<T>) {
        std::size_t used = 0;
        out = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing characters");
      } else {
        if (!v->empty() && v->front() == '-') throw std::invalid_argument("negative");
        std::size_t used = 0;
        out = static_cast<T>(std::stoull(*v, &used));
        if (used != v->size()) throw std::invalid_argument("trailing characters");
      }
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("config: bad value '{}' for {}", *v, key));
    }
  }

  std::optional<fs::path> path(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v || v->empty()) return std::nullopt;
    return resolve(*v);
  }

  std::vector<fs::path> paths(const std::string& key) const {
    std::vector<fs::path> out;
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
      for (const auto& p : split_list(*v)) out.push_back(resolve(p));
    }
    return out;
  }

  std::optional<std::vector<std::string>> list(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return split_list(*v);
  }

 private:
  fs::path resolve(const std::string& p) const {
    fs::path q(p);
    return q.is_absolute() ? q : base_ / q;
  }

  const pt::ptree& tree_;
  fs::path base_;
};

void apply_override(pt::ptree& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError(fmt::format("override '{}' is not section.key=value", assignment));
  }
  tree.put(pt::ptree::path_type(assignment.substr(0, eq), '.'), assignment.substr(eq + 1));
}

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = kSchema.find(section);
    if (it == kSchema.end()) throw ConfigError(fmt::format("config: unknown section [{}]", section));
    for (const auto& [key, _] : body) {
      if (!it->second.count(key)) throw ConfigError(fmt::format("config: unknown key '{}' in [{}]", key, section));
    }
  }
}

ExperimentSpec from_tree(pt::ptree tree, const fs::path& base, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(tree, o);
  check_schema(tree);
  const Reader r(tree, base);
  ExperimentSpec s;

  if (auto p = r.path("corpus.path")) s.corpus.path = *p;
  else throw ConfigError("config: [corpus] path is required");
  s.corpus.name = s.corpus.path.stem().string();
  r.get("corpus.name", s.corpus.name);
  r.get("corpus.text_column", s.corpus.text_column);
  r.get("corpus.label_column", s.corpus.label_column);
  r.get("corpus.id_column", s.corpus.id_column);
  r.get("corpus.min_class_count", s.corpus.min_class_count);

  s.noise_words = r.path("cleaning.noise_words");
  r.get("cleaning.keep_digits", s.cleaning.keep_digits);
  if (s.noise_words) s.cleaning.noise_words = load_noise_words(s.noise_words->string());

  if (auto v = r.list("matrix.representations")) {
    s.representations.clear();
    for (const auto& x : *v) s.representations.push_back(representation_from_string(x));
  }
  if (auto v = r.list("matrix.resamplers")) {
    s.resamplers.clear();
    for (const auto& x : *v) s.resamplers.push_back(resampler_from_string(x));
  }
  if (auto v = r.list("matrix.models")) {
    s.models.clear();
    for (const auto& x : *v) s.models.push_back(model_family_from_string(x));
  }
  auto& pc = s.pipeline;
  r.get("matrix.folds", pc.k_folds);
  r.get("matrix.seed", pc.seed);
  r.get("matrix.jobs", s.jobs);
  r.get("matrix.max_vocab", pc.max_vocab);

  s.embeddings.file = r.path("embeddings.file");
  s.embeddings.pretrain = r.paths("embeddings.pretrain");
  auto& sg = s.embeddings.sgns;
  r.get("embeddings.dim", sg.dim);
  r.get("embeddings.window", sg.window);
  r.get("embeddings.negatives", sg.negatives);
  r.get("embeddings.epochs", sg.epochs);
  r.get("embeddings.learning_rate", sg.learning_rate);
  r.get("embeddings.min_count", sg.min_count);
  r.get("embeddings.seed", sg.seed);

  r.get("augment.copies", pc.augment.n_copies);
  r.get("augment.replace_prob", pc.augment.replace_prob);
  r.get("augment.k", pc.augment.k_neighbors);
  r.get("augment.min_similarity", pc.augment.min_similarity);
  r.get("smote.k", pc.smote.k);
  if (tree.get_optional<std::string>(pt::ptree::path_type("smote.target_count", '.'))) {
    std::size_t t = 0;
    r.get("smote.target_count", t);
    pc.smote.target_count = t;
  }
  r.get("nb.alpha", pc.train.nb.alpha);
  r.get("nb.var_floor", pc.train.nb.var_floor);
  r.get("logreg.learning_rate", pc.train.logreg.learning_rate);
  r.get("logreg.l2", pc.train.logreg.l2);
  r.get("logreg.max_iters", pc.train.logreg.max_iters);
  r.get("logreg.tol", pc.train.logreg.tol);
  r.get("gbt.n_rounds", pc.train.gbt.n_rounds);
  r.get("gbt.max_depth", pc.train.gbt.max_depth);
  r.get("gbt.learning_rate", pc.train.gbt.learning_rate);
  r.get("gbt.lambda", pc.train.gbt.lambda);
  r.get("gbt.min_child_weight", pc.train.gbt.min_child_weight);
  r.get("lstm.hidden_dim", pc.train.lstm.hidden_dim);
  r.get("lstm.epochs", pc.train.lstm.epochs);
  r.get("lstm.learning_rate", pc.train.lstm.learning_rate);
  r.get("lstm.clip_norm", pc.train.lstm.clip_norm);
  r.get("lstm.max_seq_len", pc.train.lstm.max_seq_len);
  r.get("bootstrap.resamples", pc.bootstrap.n_resamples);
  r.get("bootstrap.level", pc.bootstrap.level);
  if (auto p = r.path("output.dir")) s.output_dir = *p;

  if (auto env = seed_from_environment(); env && !tree.get_optional<std::string>("matrix.seed")) pc.seed = *env;

  s.cleaning.validate();
  sg.validate();
  pc.augment.validate();
  pc.train.validate();
  if (pc.k_folds < 2) throw ConfigError("config: folds must be at least 2");
  if (s.jobs == 0) throw ConfigError("config: jobs must be positive");
  if (pc.smote.k == 0) throw ConfigError("config: smote k must be positive");
  if (s.representations.empty() || s.resamplers.empty() || s.models.empty()) {
    throw ConfigError("config: the matrix has no cells");
  }
  if (matrix_cells(s).empty()) {
    throw ConfigError("config: no supported cell in the matrix (lstm needs word2vec and cannot follow smote)");
  }
  return s;
}

}  // namespace

std::optional<std::uint64_t> seed_from_environment() {
  const char* v = std::getenv("NEWSCAT_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(v, &used);
    if (used == std::string_view(v).size()) return seed;
  } catch (const std::logic_error&) {
  }
  spdlog::warn("ignoring NEWSCAT_SEED='{}': not an unsigned integer", v);
  return std::nullopt;
}

ExperimentSpec parse_experiment_string(const std::string& ini, const fs::path& base_dir,
                                       const std::vector<std::string>& overrides) {
  pt::ptree tree;
  std::istringstream in(ini);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  return from_tree(std::move(tree), base_dir, overrides);
}

ExperimentSpec parse_experiment_file(const fs::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_string(buf.str(), path.parent_path(), overrides);
}

std::vector<PipelineSpec> matrix_cells(const ExperimentSpec& spec) {
  std::vector<PipelineSpec> cells;
  for (auto res : spec.resamplers) {
    for (auto rep : spec.representations) {
      for (auto model : spec.models) {
        const PipelineSpec cell{rep, res, model};
        if (is_valid_spec(cell)) cells.push_back(cell);
      }
    }
  }
  return cells;
}

bool needs_embeddings(std::span<const PipelineSpec> cells) {
  for (const auto& c : cells) {
    if (c.representation == Representation::word2vec || c.resampler == Resampler::augment) return true;
  }
  return false;
}

PreparedData prepare_data(const ExperimentSpec& spec, bool need_embeddings) {
  PreparedData data;
  auto loaded = load_corpus_csv(spec.corpus.path.string(), spec.corpus.text_column, spec.corpus.label_column,
                                spec.corpus.id_column);
  if (loaded.skipped_rows) spdlog::info("{}: skipped {} rows with empty text or label", spec.corpus.name, loaded.skipped_rows);
  LabeledCorpus corpus = prune_rare_labels(loaded.corpus, spec.corpus.min_class_count);
  auto cleaned = clean_corpus(corpus, spec.cleaning);
  data.corpus = std::move(cleaned.corpus);
  data.dropped_documents = cleaned.dropped;
  if (need_embeddings) {
    if (spec.embeddings.file) {
      data.table = load_embeddings(spec.embeddings.file->string());
    } else if (!spec.embeddings.pretrain.empty()) {
      std::vector<std::string> paths;
      for (const auto& p : spec.embeddings.pretrain) paths.push_back(p.string());
      const auto sentences = load_sentences(paths, spec.cleaning);
      spdlog::info("training embeddings on {} sentences", sentences.size());
      data.table = train_sgns(sentences, spec.embeddings.sgns).table;
    } else {
      throw ConfigError("config: word2vec or augmentation needs [embeddings] file or pretrain");
    }
  }
  return data;
}

CellResult run_cell(const PreparedData& data, const PipelineSpec& cell, const PipelineConfig& config) {
  CellResult out;
  out.spec = cell;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto cv = cross_validate(data.corpus, cell, config, data.table ? &*data.table : nullptr);
    out.report = std::move(cv.pooled);
    out.per_fold = std::move(cv.per_fold);
  } catch (const std::exception& e) {
    out.error = e.what();
    spdlog::error("{}/{}/{} failed: {}", to_string(cell.representation), to_string(cell.resampler),
                  to_string(cell.model), e.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += fmt::format(".tmp{}", std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write {}", tmp.string()));
    out << contents;
    out.close();
    if (!out) throw IoError(fmt::format("failed writing {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

MatrixOutcome run_matrix(const ExperimentSpec& spec) {
  const auto cells = matrix_cells(spec);
  if (cells.empty()) throw ConfigError("matrix: no supported cells");
  const PreparedData data = prepare_data(spec, needs_embeddings(cells));
  spdlog::info("{}: {} documents, {} classes, {} cells", spec.corpus.name, data.corpus.size(),
               data.corpus.label_set().size(), cells.size());

  MatrixOutcome outcome;
  outcome.cells.resize(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex files_mutex;
  auto cell_path = [&](const PipelineSpec& c) {
    return spec.output_dir / fmt::format("{}_{}_{}_{}.json", spec.corpus.name, to_string(c.resampler),
                                         to_string(c.representation), to_string(c.model));
  };
  std::exception_ptr io_failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) try {
      CellResult r = run_cell(data, cells[i], spec.pipeline);
      nlohmann::json j = cell_json(r, data.corpus.label_set());
      j["corpus"] = spec.corpus.name;
      j["seed"] = spec.pipeline.seed;
      j["folds"] = spec.pipeline.k_folds;
      write_file_atomic(cell_path(cells[i]), j.dump(2) + "\n");
      spdlog::info("{}/{}/{}: {} in {:.1f}s", to_string(cells[i].representation), to_string(cells[i].resampler),
                   to_string(cells[i].model), r.report ? fmt::format("macro-F1 {:.4f}", r.report->f1_macro) : "FAILED",
                   r.seconds);
      outcome.cells[i] = std::move(r);
    } catch (...) {
      std::lock_guard lock(files_mutex);
      if (!io_failure) io_failure = std::current_exception();
    }
  };
  const std::size_t n_threads = std::min(spec.jobs, cells.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (io_failure) std::rethrow_exception(io_failure);

  for (std::size_t i = 0; i < cells.size(); ++i) {
    outcome.files.push_back(cell_path(cells[i]));
    if (!outcome.cells[i].report) ++outcome.failures;
  }
  for (auto res : spec.resamplers) {
    std::vector<CellResult> group;
    for (const auto& c : outcome.cells) {
      if (c.spec.resampler == res) group.push_back(c);
    }
    if (group.empty()) continue;
    const auto stem = spec.output_dir / fmt::format("{}_{}", spec.corpus.name, to_string(res));
    fs::path md = stem, csv = stem;
    md += ".md";
    csv += ".csv";
    write_file_atomic(md, markdown_table(group));
    write_file_atomic(csv, csv_table(group));
    outcome.files.push_back(md);
    outcome.files.push_back(csv);
  }
  return outcome;
}

}  // namespace newscat
