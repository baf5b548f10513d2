#include "newscat/report.hpp"

#include <sstream>

#include <fmt/format.h>

#include "newscat/csv.hpp"

namespace newscat {

std::string_view display_name(Representation r) {
  switch (r) {
    case Representation::bow:
      return "Bag-Of-Words";
    case Representation::tfidf:
      return "TF-IDF";
    case Representation::word2vec:
      return "Word2vec";
  }
  return "?";
}

std::string_view display_name(ModelFamily m) {
  switch (m) {
    case ModelFamily::nb:
      return "Naive Bayes";
    case ModelFamily::logreg:
      return "Logistic Regression";
    case ModelFamily::gbt:
      return "XGBoost";
    case ModelFamily::lstm:
      return "LSTM";
  }
  return "?";
}

namespace {

std::string pct(double v) { return fmt::format("{:.2f}", 100.0 * v); }

std::optional<std::size_t> best_row(std::span<const CellResult> cells) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].report) continue;
    if (!best || cells[i].report->f1_macro > cells[*best].report->f1_macro) best = i;
  }
  return best;
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace

std::vector<std::string> table_row(const CellResult& cell) {
  std::vector<std::string> row{std::string(display_name(cell.spec.representation)),
                               std::string(display_name(cell.spec.model))};
  if (!cell.report) {
    row.insert(row.end(), {"FAILED", "FAILED", "FAILED", "FAILED", cell.error});
    return row;
  }
  const auto& r = *cell.report;
  row.push_back(pct(r.precision_macro));
  row.push_back(pct(r.recall_macro));
  row.push_back(pct(r.f1_macro));
  row.push_back(pct(r.accuracy));
  row.push_back(fmt::format("({},{})", pct(r.f1_ci.low), pct(r.f1_ci.high)));
  return row;
}

std::string markdown_table(std::span<const CellResult> cells) {
  std::string out = fmt::format("| {} |\n", fmt::join(kTableHeader, " | "));
  out += "|";
  for (std::size_t i = 0; i < std::size(kTableHeader); ++i) out += "---|";
  out += '\n';
  const auto best = best_row(cells);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto row = table_row(cells[i]);
    for (auto& v : row) {
      v = md_escape(v);
      if (best && *best == i) v = "**" + v + "**";
    }
    out += fmt::format("| {} |\n", fmt::join(row, " | "));
  }
  return out;
}

std::string csv_table(std::span<const CellResult> cells) {
  std::ostringstream out;
  csv::write_row(out, std::vector<std::string>(std::begin(kTableHeader), std::end(kTableHeader)));
  for (const auto& cell : cells) csv::write_row(out, table_row(cell));
  return out.str();
}

nlohmann::json cell_json(const CellResult& cell, const LabelSet& labels) {
  nlohmann::json j = {{"representation", to_string(cell.spec.representation)},
                      {"resampler", to_string(cell.spec.resampler)},
                      {"model", to_string(cell.spec.model)},
                      {"model_kind", to_string(model_kind_for(cell.spec))},
                      {"labels", labels.names()}};
  if (cell.report) {
    j["status"] = "ok";
    j["metrics"] = to_json(*cell.report, labels);
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : cell.per_fold) folds.push_back(to_json(f, labels));
    j["per_fold"] = std::move(folds);
  } else {
    j["status"] = "failed";
    j["error"] = cell.error;
  }
  return j;
}

}  // namespace newscat
