// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace spoofdet {

struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color;
    std::string label;
};

// Single-panel line chart with linear axes, ticks, and a legend.
std::string svg_line_chart(const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series,
                           const std::string& comment = "");

// Two-panel figure, both panels rendered as line charts.
std::string svg_two_panel(const std::string& title,
                          const std::string& left_title,
                          const std::string& x_label_left,
                          const std::string& y_label_left,
                          const std::vector<SvgSeries>& left,
                          const std::string& right_title,
                          const std::string& x_label_right,
                          const std::string& y_label_right,
                          const std::vector<SvgSeries>& right,
                          const std::string& comment = "");

struct SvgHistogram {
    std::vector<double> bin_edges;  // n_bins + 1
    std::vector<double> count_a;
    std::vector<double> count_b;
    std::string label_a;
    std::string label_b;
};

std::string svg_histogram(const std::string& title, const std::string& x_label,
                          const SvgHistogram& hist,
                          const std::string& comment = "");

// Diverging-color matrix for values in [-1, 1] with row/column names.
std::string svg_heatmap(const std::string& title,
                        const std::vector<std::string>& names,
                        const std::vector<double>& values,
                        const std::string& comment = "");

void write_text_file(const std::string& path, const std::string& content);

}  // namespace spoofdet
