#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace logsift::svg {

// Self-contained SVG documents: inline styles only, no external assets.

struct Series {
  std::string name;
  std::vector<double> ys;
};

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values);

/// Shared x axis; each series must have xs.size() points.
std::string line_chart(const std::string& title, const std::vector<double>& xs, const std::vector<Series>& series,
                       const std::string& x_label, const std::string& y_label);

/// Cell colour scales with log10(1 + value) when `log_scale` is set.
std::string heatmap(const std::string& title, const Eigen::MatrixXd& values, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels, bool log_scale);

std::string escape_xml(const std::string& text);

}  // namespace logsift::svg
