#include "logsift/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace logsift::svg {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string header(double w, double h, const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" style=\"font-family:sans-serif;font-size:11px\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" + "<text x=\"" + num(w / 2) +
         "\" y=\"18\" text-anchor=\"middle\" style=\"font-size:14px;font-weight:bold\">" + escape_xml(title) +
         "</text>\n";
}

// Viridis-like ramp through a few anchor colours.
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kStops = {
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(kStops[i][0] + f * (kStops[i + 1][0] - kStops[i][0]))),
                static_cast<int>(std::lround(kStops[i][1] + f * (kStops[i + 1][1] - kStops[i][1]))),
                static_cast<int>(std::lround(kStops[i][2] + f * (kStops[i + 1][2] - kStops[i][2]))));
  return buf;
}

}  // namespace

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values) {
  const double left = 170, row = 22, width = 640;
  const double height = 40 + row * static_cast<double>(values.size()) + 20;
  const double vmax = values.empty() ? 1.0 : std::max(1e-12, *std::max_element(values.begin(), values.end()));
  std::string s = header(width, height, title);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = 34 + row * static_cast<double>(i);
    const double w = (width - left - 80) * values[i] / vmax;
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y + 14) + "\" text-anchor=\"end\">" +
         escape_xml(i < labels.size() ? labels[i] : "") + "</text>\n";
    s += "<rect x=\"" + num(left) + "\" y=\"" + num(y + 3) + "\" width=\"" + num(w) + "\" height=\"" +
         num(row - 6) + "\" fill=\"" + kPalette[i % kPalette.size()] + "\"/>\n";
    s += "<text x=\"" + num(left + w + 4) + "\" y=\"" + num(y + 14) + "\">" + num(values[i]) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string line_chart(const std::string& title, const std::vector<double>& xs, const std::vector<Series>& series,
                       const std::string& x_label, const std::string& y_label) {
  const double width = 760, height = 420, left = 60, right = 190, top = 34, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!xs.empty()) {
    xmin = *std::min_element(xs.begin(), xs.end());
    xmax = *std::max_element(xs.begin(), xs.end());
  }
  for (const Series& se : series) {
    for (double y : se.ys) ymax = std::max(ymax, y);
  }
  if (xmax <= xmin) xmax = xmin + 1;
  auto px = [&](double x) { return left + pw * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return top + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::string s = header(width, height, title);
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = ymin + (ymax - ymin) * t / 4.0;
    s += "<text x=\"" + num(left - 4) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">" + num(y) +
         "</text>\n";
  }
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 12) + "\" text-anchor=\"middle\">" +
       escape_xml(x_label) + "</text>\n";
  s += "<text x=\"14\" y=\"" + num(top + ph / 2) + "\" transform=\"rotate(-90 14 " + num(top + ph / 2) +
       ")\" text-anchor=\"middle\">" + escape_xml(y_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kPalette[k % kPalette.size()];
    std::string pts;
    for (std::size_t i = 0; i < xs.size() && i < series[k].ys.size(); ++i) {
      pts += num(px(xs[i])) + "," + num(py(series[k].ys[i])) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
    const double ly = top + 14 * static_cast<double>(k);
    s += "<rect x=\"" + num(width - right + 10) + "\" y=\"" + num(ly) + "\" width=\"10\" height=\"10\" fill=\"" +
         colour + "\"/>\n";
    s += "<text x=\"" + num(width - right + 24) + "\" y=\"" + num(ly + 9) + "\">" + escape_xml(series[k].name) +
         "</text>\n";
  }
  return s + "</svg>\n";
}

std::string heatmap(const std::string& title, const Eigen::MatrixXd& values, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels, bool log_scale) {
  const double cell = 16, left = 150, top = 120;
  const double width = left + cell * static_cast<double>(values.cols()) + 20;
  const double height = top + cell * static_cast<double>(values.rows()) + 20;
  Eigen::MatrixXd v = values;
  if (log_scale) v = (values.array().max(0.0)).log1p() / std::log(10.0);
  const double vmax = v.size() == 0 ? 1.0 : std::max(1e-12, v.maxCoeff());
  const double vmin = v.size() == 0 ? 0.0 : std::min(0.0, v.minCoeff());

  std::string s = header(std::max(width, 300.0), height, title);
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double x = left + cell * static_cast<double>(c) + cell / 2;
    const std::string label = static_cast<std::size_t>(c) < col_labels.size() ? col_labels[c] : "";
    s += "<text x=\"" + num(x) + "\" y=\"" + num(top - 4) + "\" transform=\"rotate(-60 " + num(x) + " " +
         num(top - 4) + ")\">" + escape_xml(label) + "</text>\n";
  }
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    const double y = top + cell * static_cast<double>(r);
    const std::string label = static_cast<std::size_t>(r) < row_labels.size() ? row_labels[r] : "";
    s += "<text x=\"" + num(left - 4) + "\" y=\"" + num(y + cell - 4) + "\" text-anchor=\"end\">" +
         escape_xml(label) + "</text>\n";
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      s += "<rect x=\"" + num(left + cell * static_cast<double>(c)) + "\" y=\"" + num(y) + "\" width=\"" +
           num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" + ramp((v(r, c) - vmin) / (vmax - vmin)) +
           "\"><title>" + num(values(r, c)) + "</title></rect>\n";
    }
  }
  return s + "</svg>\n";
}

}  // namespace logsift::svg
