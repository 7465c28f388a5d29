// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hwk/eval.hpp"

namespace hwk {

/// Horizontal bars around a zero axis; positive values extend right.
std::string svg_bar_chart(const std::vector<std::pair<std::string, double>>& bars, std::string_view title);

/// 2x2 heatmap with true labels as rows and predictions as columns.
std::string svg_confusion(const ConfusionMatrix& cm, std::string_view title,
                          std::string_view negative = "non-hate", std::string_view positive = "hate");

std::string xml_escape(std::string_view text);

}  // namespace hwk
