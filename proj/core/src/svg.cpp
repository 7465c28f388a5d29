// SPDX-License-Identifier: Apache-2.0
#include "hwk/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace hwk {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

std::string svg_bar_chart(const std::vector<std::pair<std::string, double>>& bars, std::string_view title) {
  constexpr int kLabel = 180, kPlot = 400, kRow = 22, kTop = 36, kPad = 12;
  const int width = kLabel + kPlot + 2 * kPad + 60;
  const int height = kTop + kRow * int(bars.size()) + kPad;
  double extent = 0;
  for (const auto& [_, v] : bars) extent = std::max(extent, std::abs(v));
  if (extent == 0) extent = 1;
  const bool has_negative = std::any_of(bars.begin(), bars.end(), [](const auto& b) { return b.second < 0; });
  const double zero = kLabel + kPad + (has_negative ? kPlot / 2.0 : 0.0);
  const double span = has_negative ? kPlot / 2.0 : double(kPlot);

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      width, height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\" font-weight=\"bold\">{}</text>\n", kPad,
                     xml_escape(title));
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& [label, v] = bars[i];
    const int y = kTop + int(i) * kRow;
    const double len = std::abs(v) / extent * span;
    const double x = v >= 0 ? zero : zero - len;
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kLabel, y + 15,
                       xml_escape(label));
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" fill=\"{}\"/>\n", x, y + 3, len,
                       kRow - 6, v >= 0 ? "#c0392b" : "#2471a3");
    out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" fill=\"#333\">{:.4f}</text>\n",
                       v >= 0 ? zero + len + 4 : zero + 4, y + 15, v);
  }
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"#000\"/>\n", zero, kTop, zero,
                     height - kPad);
  out += "</svg>\n";
  return out;
}

std::string svg_confusion(const ConfusionMatrix& cm, std::string_view title, std::string_view negative,
                          std::string_view positive) {
  constexpr int kCell = 110, kLeft = 110, kTop = 70;
  const int width = kLeft + 2 * kCell + 20, height = kTop + 2 * kCell + 40;
  const long cells[2][2] = {{cm.tn, cm.fp}, {cm.fn, cm.tp}};
  const long peak = std::max({cm.tn, cm.fp, cm.fn, cm.tp, 1L});
  const std::string_view names[2] = {negative, positive};

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      width, height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"12\" y=\"20\" font-size=\"14\" font-weight=\"bold\">{}</text>\n", xml_escape(title));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">predicted</text>\n", kLeft + kCell, kTop - 28);
  for (int r = 0; r < 2; ++r) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kLeft - 8, kTop + r * kCell + kCell / 2,
                       xml_escape(names[r]));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + r * kCell + kCell / 2,
                       kTop - 8, xml_escape(names[r]));
    for (int c = 0; c < 2; ++c) {
      const double t = double(cells[r][c]) / double(peak);
      const int shade = int(std::lround(255 - 180 * t));
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},255)\" stroke=\"#555\"/>\n",
                         kLeft + c * kCell, kTop + r * kCell, kCell, kCell, shade, shade);
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                         kLeft + c * kCell + kCell / 2, kTop + r * kCell + kCell / 2 + 6, cells[r][c]);
    }
  }
  out += fmt::format("<text x=\"12\" y=\"{}\">rows: true label</text>\n", height - 12);
  out += "</svg>\n";
  return out;
}

}  // namespace hwk
