#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "newscat/evaluation.hpp"
#include "newscat/pipeline.hpp"

namespace newscat {

// Outcome of one matrix cell; `report` is empty when the cell failed.
struct CellResult {
  PipelineSpec spec;
  std::optional<MetricsReport> report;
  std::vector<MetricsReport> per_fold;
  std::string error;
  double seconds = 0.0;
};

std::string_view display_name(Representation r);
std::string_view display_name(ModelFamily m);

inline constexpr std::string_view kTableHeader[] = {
    "Preprocessing", "Model", "Precision(%)", "Recall(%)", "F1-score(%)", "Accuracy(%)",
    "Confidence Interval(f1 score)"};

// Table cells for one result, percentages with two decimals.
std::vector<std::string> table_row(const CellResult& cell);

// The row with the highest macro-F1 is bolded (first one on ties).
std::string markdown_table(std::span<const CellResult> cells);
std::string csv_table(std::span<const CellResult> cells);

nlohmann::json cell_json(const CellResult& cell, const LabelSet& labels);

}  // namespace newscat
