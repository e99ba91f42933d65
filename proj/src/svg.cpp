// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "spoofdet/error.hpp"

namespace spoofdet {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Bounds {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void expand(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    void pad() {
        if (!(xmax > xmin)) {
            xmin -= 0.5;
            xmax += 0.5;
        }
        if (!(ymax > ymin)) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double dx = 0.04 * (xmax - xmin);
        const double dy = 0.04 * (ymax - ymin);
        xmin -= dx;
        xmax += dx;
        ymin -= dy;
        ymax += dy;
    }
};

// renders one chart panel into `out` at the given origin
void render_panel(std::string& out, double ox, double oy, double width,
                  double height, const std::string& title,
                  const std::string& x_label, const std::string& y_label,
                  const std::vector<SvgSeries>& series) {
    const double ml = 52, mr = 12, mt = 28, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;

    Bounds b;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) b.expand(x, y);
    if (series.empty() || !std::isfinite(b.xmin)) b = {0, 1, 0, 1};
    b.pad();

    auto px = [&](double x) {
        return ox + ml + (x - b.xmin) / (b.xmax - b.xmin) * pw;
    };
    auto py = [&](double y) {
        return oy + mt + ph - (y - b.ymin) / (b.ymax - b.ymin) * ph;
    };

    out += "<rect x='" + fmt(ox + ml) + "' y='" + fmt(oy + mt) + "' width='" +
           fmt(pw) + "' height='" + fmt(ph) +
           "' fill='white' stroke='#444' stroke-width='1'/>\n";
    out += "<text x='" + fmt(ox + width / 2) + "' y='" + fmt(oy + 16) +
           "' text-anchor='middle' font-size='13'>" + escape(title) +
           "</text>\n";

    // 5 ticks per axis
    for (int i = 0; i <= 4; ++i) {
        const double tx = b.xmin + (b.xmax - b.xmin) * i / 4.0;
        const double ty = b.ymin + (b.ymax - b.ymin) * i / 4.0;
        out += "<line x1='" + fmt(px(tx)) + "' y1='" + fmt(oy + mt + ph) +
               "' x2='" + fmt(px(tx)) + "' y2='" + fmt(oy + mt + ph + 4) +
               "' stroke='#444'/>\n";
        out += "<text x='" + fmt(px(tx)) + "' y='" + fmt(oy + mt + ph + 16) +
               "' text-anchor='middle' font-size='10'>" + fmt(tx) + "</text>\n";
        out += "<line x1='" + fmt(ox + ml - 4) + "' y1='" + fmt(py(ty)) +
               "' x2='" + fmt(ox + ml) + "' y2='" + fmt(py(ty)) +
               "' stroke='#444'/>\n";
        out += "<text x='" + fmt(ox + ml - 6) + "' y='" + fmt(py(ty) + 3) +
               "' text-anchor='end' font-size='10'>" + fmt(ty) + "</text>\n";
    }
    out += "<text x='" + fmt(ox + ml + pw / 2) + "' y='" +
           fmt(oy + height - 6) + "' text-anchor='middle' font-size='11'>" +
           escape(x_label) + "</text>\n";
    out += "<text x='" + fmt(ox + 14) + "' y='" + fmt(oy + mt + ph / 2) +
           "' text-anchor='middle' font-size='11' transform='rotate(-90 " +
           fmt(ox + 14) + " " + fmt(oy + mt + ph / 2) + ")'>" +
           escape(y_label) + "</text>\n";

    double legend_y = oy + mt + 12;
    for (const auto& s : series) {
        std::string path = "<polyline fill='none' stroke='" + s.color +
                           "' stroke-width='1.5' points='";
        for (const auto& [x, y] : s.points)
            path += fmt(px(x)) + "," + fmt(py(y)) + " ";
        path += "'/>\n";
        out += path;
        if (!s.label.empty()) {
            out += "<line x1='" + fmt(ox + ml + pw - 110) + "' y1='" +
                   fmt(legend_y - 3) + "' x2='" + fmt(ox + ml + pw - 92) +
                   "' y2='" + fmt(legend_y - 3) + "' stroke='" + s.color +
                   "' stroke-width='2'/>\n";
            out += "<text x='" + fmt(ox + ml + pw - 88) + "' y='" +
                   fmt(legend_y) + "' font-size='10'>" + escape(s.label) +
                   "</text>\n";
            legend_y += 13;
        }
    }
}

std::string svg_open(double width, double height, const std::string& comment) {
    std::string out = "<svg xmlns='http://www.w3.org/2000/svg' width='" +
                      fmt(width) + "' height='" + fmt(height) + "'>\n";
    if (!comment.empty()) out += "<!-- " + escape(comment) + " -->\n";
    out += "<rect width='100%' height='100%' fill='white'/>\n";
    return out;
}

}  // namespace

std::string svg_line_chart(const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series,
                           const std::string& comment) {
    std::string out = svg_open(520, 400, comment);
    render_panel(out, 0, 0, 520, 400, title, x_label, y_label, series);
    out += "</svg>\n";
    return out;
}

std::string svg_two_panel(const std::string& title,
                          const std::string& left_title,
                          const std::string& x_label_left,
                          const std::string& y_label_left,
                          const std::vector<SvgSeries>& left,
                          const std::string& right_title,
                          const std::string& x_label_right,
                          const std::string& y_label_right,
                          const std::vector<SvgSeries>& right,
                          const std::string& comment) {
    std::string out = svg_open(1040, 430, comment);
    out += "<text x='520' y='18' text-anchor='middle' font-size='15'>" +
           escape(title) + "</text>\n";
    render_panel(out, 0, 24, 520, 400, left_title, x_label_left, y_label_left,
                 left);
    render_panel(out, 520, 24, 520, 400, right_title, x_label_right,
                 y_label_right, right);
    out += "</svg>\n";
    return out;
}

std::string svg_histogram(const std::string& title, const std::string& x_label,
                          const SvgHistogram& hist,
                          const std::string& comment) {
    const std::size_t n = hist.count_a.size();
    std::string out = svg_open(520, 400, comment);
    const double ml = 52, mr = 12, mt = 28, mb = 40;
    const double pw = 520 - ml - mr, ph = 400 - mt - mb;

    double maxc = 1.0;
    for (double v : hist.count_a) maxc = std::max(maxc, v);
    for (double v : hist.count_b) maxc = std::max(maxc, v);
    const double xmin = hist.bin_edges.front();
    const double xmax = hist.bin_edges.back();

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double c) { return mt + ph - c / maxc * ph; };

    out += "<text x='260' y='16' text-anchor='middle' font-size='13'>" +
           escape(title) + "</text>\n";
    out += "<rect x='" + fmt(ml) + "' y='" + fmt(mt) + "' width='" + fmt(pw) +
           "' height='" + fmt(ph) +
           "' fill='white' stroke='#444' stroke-width='1'/>\n";

    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = px(hist.bin_edges[i]);
        const double x1 = px(hist.bin_edges[i + 1]);
        const double w = std::max(0.5, x1 - x0);
        if (hist.count_a[i] > 0)
            out += "<rect x='" + fmt(x0) + "' y='" + fmt(py(hist.count_a[i])) +
                   "' width='" + fmt(w) + "' height='" +
                   fmt(mt + ph - py(hist.count_a[i])) +
                   "' fill='#3366cc' fill-opacity='0.55'/>\n";
        if (hist.count_b[i] > 0)
            out += "<rect x='" + fmt(x0) + "' y='" + fmt(py(hist.count_b[i])) +
                   "' width='" + fmt(w) + "' height='" +
                   fmt(mt + ph - py(hist.count_b[i])) +
                   "' fill='#ff8800' fill-opacity='0.55'/>\n";
    }

    for (int i = 0; i <= 4; ++i) {
        const double tx = xmin + (xmax - xmin) * i / 4.0;
        out += "<text x='" + fmt(px(tx)) + "' y='" + fmt(mt + ph + 16) +
               "' text-anchor='middle' font-size='10'>" + fmt(tx) + "</text>\n";
        const double tc = maxc * i / 4.0;
        out += "<text x='" + fmt(ml - 6) + "' y='" + fmt(py(tc) + 3) +
               "' text-anchor='end' font-size='10'>" + fmt(tc) + "</text>\n";
    }
    out += "<text x='" + fmt(ml + pw / 2) + "' y='394' text-anchor='middle' "
           "font-size='11'>" + escape(x_label) + "</text>\n";
    out += "<rect x='" + fmt(ml + pw - 110) + "' y='" + fmt(mt + 6) +
           "' width='12' height='8' fill='#3366cc' fill-opacity='0.55'/>\n";
    out += "<text x='" + fmt(ml + pw - 94) + "' y='" + fmt(mt + 13) +
           "' font-size='10'>" + escape(hist.label_a) + "</text>\n";
    out += "<rect x='" + fmt(ml + pw - 110) + "' y='" + fmt(mt + 20) +
           "' width='12' height='8' fill='#ff8800' fill-opacity='0.55'/>\n";
    out += "<text x='" + fmt(ml + pw - 94) + "' y='" + fmt(mt + 27) +
           "' font-size='10'>" + escape(hist.label_b) + "</text>\n";
    out += "</svg>\n";
    return out;
}

std::string svg_heatmap(const std::string& title,
                        const std::vector<std::string>& names,
                        const std::vector<double>& values,
                        const std::string& comment) {
    const std::size_t d = names.size();
    const double cell = d > 0 ? std::max(8.0, 360.0 / static_cast<double>(d))
                              : 8.0;
    const double ml = 150, mt = 40;
    const double size = cell * static_cast<double>(d);
    std::string out = svg_open(ml + size + 20, mt + size + 150, comment);
    out += "<text x='" + fmt(ml + size / 2) +
           "' y='20' text-anchor='middle' font-size='14'>" + escape(title) +
           "</text>\n";

    auto color = [](double v) {
        // -1 blue, 0 white, +1 red
        v = std::clamp(v, -1.0, 1.0);
        int r, g, b;
        if (v >= 0) {
            r = 255;
            g = static_cast<int>(255 * (1.0 - v));
            b = static_cast<int>(255 * (1.0 - v));
        } else {
            r = static_cast<int>(255 * (1.0 + v));
            g = static_cast<int>(255 * (1.0 + v));
            b = 255;
        }
        char buf[16];
        std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };

    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out += "<rect x='" + fmt(ml + cell * static_cast<double>(j)) +
                   "' y='" + fmt(mt + cell * static_cast<double>(i)) +
                   "' width='" + fmt(cell) + "' height='" + fmt(cell) +
                   "' fill='" + color(values[i * d + j]) + "'/>\n";
        }
        out += "<text x='" + fmt(ml - 4) +
               "' y='" + fmt(mt + cell * (static_cast<double>(i) + 0.7)) +
               "' text-anchor='end' font-size='8'>" + escape(names[i]) +
               "</text>\n";
        const double cxl = ml + cell * (static_cast<double>(i) + 0.7);
        const double cyl = mt + size + 4;
        out += "<text x='" + fmt(cxl) + "' y='" + fmt(cyl) +
               "' font-size='8' text-anchor='start' transform='rotate(60 " +
               fmt(cxl) + " " + fmt(cyl) + ")'>" + escape(names[i]) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
}

}  // namespace spoofdet
