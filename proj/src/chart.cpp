#include "newscat/chart.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "newscat/error.hpp"

namespace newscat {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string class_distribution_svg(const LabeledCorpus& corpus, const std::string& title, const ChartStyle& style) {
  if (corpus.empty()) throw EmptyCorpusError("chart: empty corpus");
  const auto shares = class_distribution(corpus);
  std::size_t max_count = 0;
  for (const auto& s : shares) max_count = std::max(max_count, s.count);

  const int top = 40;
  const int row = style.bar_height + style.row_gap;
  const int width = style.label_width + style.bar_max_width + 80;
  const int height = top + row * static_cast<int>(shares.size()) + 10;

  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "  <rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "  <text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{3}</text>\n",
      width, height, width / 2, xml_escape(title));
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const auto& s = shares[i];
    const int y = top + row * static_cast<int>(i);
    const auto w = static_cast<long>(std::lround(static_cast<double>(s.count) / static_cast<double>(max_count) *
                                                 style.bar_max_width));
    const int mid = y + style.bar_height / 2 + 5;
    out += fmt::format(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"end\">{}</text>\n",
        style.label_width - 8, mid, xml_escape(s.name));
    out += fmt::format("  <rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4477aa\"/>\n",
                       style.label_width, y, w, style.bar_height);
    out += fmt::format("  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
                       style.label_width + w + 6, mid, s.count);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace newscat
