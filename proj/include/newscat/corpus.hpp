#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace newscat {

using Label = int;

struct Document {
  std::string id;
  std::string text;
  std::size_t token_count = 0;

  bool operator==(const Document&) const = default;
};

// Ordered set of distinct category names with a dense 0-based index.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names);

  // Returns the id of `name`, appending it if new.
  Label add(const std::string& name);
  std::optional<Label> find(std::string_view name) const;

  const std::string& name(Label id) const { return names_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  bool operator==(const LabelSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Label> index_;
};

// Documents with aligned labels. Immutable once built; the constructor
// checks that ids are unique and every label is inside the label set.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  LabeledCorpus(std::vector<Document> documents, std::vector<Label> labels, LabelSet label_set);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Label>& labels() const { return labels_; }
  const LabelSet& label_set() const { return label_set_; }
  const std::vector<std::size_t>& class_counts() const { return class_counts_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  std::vector<std::string> texts() const;

  // Selected rows in the given order, same label set.
  LabeledCorpus subset(std::span<const std::size_t> indices) const;

  bool operator==(const LabeledCorpus&) const = default;

 private:
  std::vector<Document> documents_;
  std::vector<Label> labels_;
  LabelSet label_set_;
  std::vector<std::size_t> class_counts_;
};

struct CsvLoadResult {
  LabeledCorpus corpus;
  std::size_t skipped_rows = 0;  // rows with empty text or empty label
};

// Loads an RFC 4180 CSV with a header row. Labels are trimmed and lowercased
// and numbered in first-appearance order. If `id_column` is present in the
// header it supplies document ids, otherwise ids are 1-based row numbers.
CsvLoadResult load_corpus_csv(const std::string& path, const std::string& text_column,
                              const std::string& label_column,
                              const std::string& id_column = "id");

void save_corpus_csv(const LabeledCorpus& corpus, const std::string& path,
                     const std::string& text_column = "text",
                     const std::string& label_column = "label");

// Keeps only classes with at least `min_count` documents and renumbers the
// surviving labels densely, preserving their relative order.
LabeledCorpus prune_rare_labels(const LabeledCorpus& corpus, std::size_t min_count);

struct ClassShare {
  std::string name;
  std::size_t count = 0;
  double fraction = 0.0;
};

// Descending count, ties by name.
std::vector<ClassShare> class_distribution(const LabeledCorpus& corpus);

std::string normalize_label(std::string_view raw);

}  // namespace newscat
