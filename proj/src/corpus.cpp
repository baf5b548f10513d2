#include "newscat/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <fmt/format.h>

#include "newscat/csv.hpp"
#include "newscat/error.hpp"

namespace newscat {

LabelSet::LabelSet(std::vector<std::string> names) {
  for (auto& n : names) {
    if (index_.count(n)) throw ValidationError(fmt::format("duplicate label '{}'", n));
    index_.emplace(n, static_cast<Label>(names_.size()));
    names_.push_back(std::move(n));
  }
}

Label LabelSet::add(const std::string& name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  const auto id = static_cast<Label>(names_.size());
  index_.emplace(name, id);
  names_.push_back(name);
  return id;
}

std::optional<Label> LabelSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabeledCorpus::LabeledCorpus(std::vector<Document> documents, std::vector<Label> labels,
                             LabelSet label_set)
    : documents_(std::move(documents)),
      labels_(std::move(labels)),
      label_set_(std::move(label_set)),
      class_counts_(label_set_.size(), 0) {
  if (documents_.size() != labels_.size()) {
    throw ValidationError(fmt::format("corpus has {} documents but {} labels", documents_.size(),
                                      labels_.size()));
  }
  std::unordered_set<std::string> ids;
  ids.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (!ids.insert(documents_[i].id).second) {
      throw ValidationError(fmt::format("duplicate document id '{}'", documents_[i].id));
    }
    const Label y = labels_[i];
    if (y < 0 || static_cast<std::size_t>(y) >= label_set_.size()) {
      throw ValidationError(fmt::format("label id {} out of range for document '{}'", y,
                                        documents_[i].id));
    }
    ++class_counts_[static_cast<std::size_t>(y)];
  }
}

std::vector<std::string> LabeledCorpus::texts() const {
  std::vector<std::string> out;
  out.reserve(documents_.size());
  for (const auto& d : documents_) out.push_back(d.text);
  return out;
}

LabeledCorpus LabeledCorpus::subset(std::span<const std::size_t> indices) const {
  std::vector<Document> docs;
  std::vector<Label> labels;
  docs.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    docs.push_back(documents_.at(i));
    labels.push_back(labels_.at(i));
  }
  return LabeledCorpus(std::move(docs), std::move(labels), label_set_);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t column_index(const csv::Row& header, const std::string& name, const std::string& path) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw ConfigError(fmt::format("column '{}' not found in header of '{}'", name, path));
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::string normalize_label(std::string_view raw) {
  std::string out(trim(raw));
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

CsvLoadResult load_corpus_csv(const std::string& path, const std::string& text_column,
                              const std::string& label_column, const std::string& id_column) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw ConfigError(fmt::format("'{}' has no header row", path));

  csv::Row header = rows.front();
  for (auto& h : header) h = std::string(trim(h));
  const std::size_t text_idx = column_index(header, text_column, path);
  const std::size_t label_idx = column_index(header, label_column, path);
  std::optional<std::size_t> id_idx;
  if (!id_column.empty()) {
    if (auto it = std::find(header.begin(), header.end(), id_column); it != header.end()) {
      id_idx = static_cast<std::size_t>(it - header.begin());
    }
  }

  std::vector<Document> docs;
  std::vector<Label> labels;
  LabelSet label_set;
  std::size_t skipped = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::size_t i) -> std::string_view {
      return i < row.size() ? std::string_view(row[i]) : std::string_view();
    };
    const std::string_view text = cell(text_idx);
    const std::string label = normalize_label(cell(label_idx));
    if (trim(text).empty() || label.empty()) {
      ++skipped;
      continue;
    }
    Document doc;
    doc.id = id_idx ? std::string(trim(cell(*id_idx))) : std::to_string(r);
    if (doc.id.empty()) doc.id = std::to_string(r);
    doc.text = std::string(text);
    docs.push_back(std::move(doc));
    labels.push_back(label_set.add(label));
  }
  if (docs.empty()) {
    throw EmptyCorpusError(fmt::format("'{}' contains no usable rows ({} skipped)", path, skipped));
  }
  return {LabeledCorpus(std::move(docs), std::move(labels), std::move(label_set)), skipped};
}

void save_corpus_csv(const LabeledCorpus& corpus, const std::string& path,
                     const std::string& text_column, const std::string& label_column) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  csv::write_row(out, {"id", text_column, label_column});
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus.documents()[i];
    csv::write_row(out, {d.id, d.text, corpus.label_set().name(corpus.labels()[i])});
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

LabeledCorpus prune_rare_labels(const LabeledCorpus& corpus, std::size_t min_count) {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  const auto& counts = corpus.class_counts();
  std::vector<Label> remap(counts.size(), -1);
  LabelSet kept;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] >= min_count) remap[c] = kept.add(corpus.label_set().name(static_cast<Label>(c)));
  }
  std::vector<Document> docs;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Label y = remap[static_cast<std::size_t>(corpus.labels()[i])];
    if (y < 0) continue;
    docs.push_back(corpus.documents()[i]);
    labels.push_back(y);
  }
  if (docs.empty()) {
    throw EmptyCorpusError(fmt::format("no class has at least {} documents", min_count));
  }
  return LabeledCorpus(std::move(docs), std::move(labels), std::move(kept));
}

std::vector<ClassShare> class_distribution(const LabeledCorpus& corpus) {
  if (corpus.empty()) throw EmptyCorpusError("class distribution of an empty corpus");
  std::vector<ClassShare> rows;
  const double total = static_cast<double>(corpus.size());
  for (std::size_t c = 0; c < corpus.class_counts().size(); ++c) {
    const std::size_t n = corpus.class_counts()[c];
    rows.push_back({corpus.label_set().name(static_cast<Label>(c)), n, static_cast<double>(n) / total});
  }
  std::sort(rows.begin(), rows.end(), [](const ClassShare& a, const ClassShare& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.name < b.name;
  });
  return rows;
}

}  // namespace newscat
