#pragma once

#include <string>

#include "newscat/corpus.hpp"

namespace newscat {

struct ChartStyle {
  int bar_max_width = 400;
  int bar_height = 22;
  int row_gap = 8;
  int label_width = 160;
};

// Horizontal bar chart of class counts as a standalone SVG document. One
// <rect class="bar"> per class, widths round(count / max_count * bar_max_width).
std::string class_distribution_svg(const LabeledCorpus& corpus, const std::string& title,
                                   const ChartStyle& style = {});

}  // namespace newscat
