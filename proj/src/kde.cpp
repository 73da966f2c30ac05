#include "logsift/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "logsift/error.hpp"

namespace logsift {

namespace {

double weighted_quantile(const std::vector<std::pair<double, double>>& sorted, double total, double q) {
  double cum = 0.0;
  for (const auto& [v, w] : sorted) {
    cum += w;
    if (cum >= q * total) return v;
  }
  return sorted.back().first;
}

std::vector<double> centres(double lo, double hi, int n, double& step) {
  step = (hi - lo) / n;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (i + 0.5) * step;
  return out;
}

// Rows: grid positions, columns: points.
Eigen::MatrixXd kernel_matrix(const std::vector<double>& grid, std::span<const WeightedPoint> points, double h,
                              bool x_axis) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(points.size()));
  const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * h);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double c = x_axis ? points[p].x : points[p].y;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double u = (grid[g] - c) / h;
      k(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(p)) = norm * std::exp(-0.5 * u * u);
    }
  }
  return k;
}

}  // namespace

double silverman_bandwidth(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values for bandwidth");
  if (weights.size() != values.size()) throw Error(ErrorCode::ShapeMismatch, "one weight per value required");
  double total = 0.0, sq = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += weights[i];
    sq += weights[i] * weights[i];
    mean += weights[i] * values[i];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "total weight must be positive");
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) var += weights[i] * (values[i] - mean) * (values[i] - mean);
  const double sd = std::sqrt(var / total);

  std::vector<std::pair<double, double>> sorted;
  for (std::size_t i = 0; i < values.size(); ++i) sorted.emplace_back(values[i], weights[i]);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = (weighted_quantile(sorted, total, 0.75) - weighted_quantile(sorted, total, 0.25)) / 1.34;

  double spread = std::min(sd, iqr);
  if (!(spread > 0.0)) spread = std::max(sd, iqr);
  if (!(spread > 0.0)) return 1.0;
  const double n_eff = total * total / sq;
  return 0.9 * spread * std::pow(n_eff, -0.2);
}

KdeGrid kde_density(std::span<const WeightedPoint> points, const KdeOptions& options) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points for density estimate");
  if (options.nx < 2 || options.ny < 2) throw Error(ErrorCode::InvalidArgument, "grid needs nx, ny >= 2");
  std::vector<double> xs, ys, ws;
  for (const WeightedPoint& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.w) || p.w < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "points need finite coordinates and non-negative weights");
    }
    xs.push_back(p.x);
    ys.push_back(p.y);
    ws.push_back(p.w);
  }

  KdeGrid g;
  g.hx = options.hx ? *options.hx : silverman_bandwidth(xs, ws);
  g.hy = options.hy ? *options.hy : silverman_bandwidth(ys, ws);
  if (!(g.hx > 0.0) || !(g.hy > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidths must be positive");

  std::array<double, 4> b{};
  if (options.bounds) {
    b = *options.bounds;
    if (!(b[1] > b[0]) || !(b[3] > b[2])) throw Error(ErrorCode::InvalidArgument, "empty grid bounds");
  } else {
    auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    b = {*xmin - 4 * g.hx, *xmax + 4 * g.hx, *ymin - 4 * g.hy, *ymax + 4 * g.hy};
  }
  g.xs = centres(b[0], b[1], options.nx, g.dx);
  g.ys = centres(b[2], b[3], options.ny, g.dy);

  const Eigen::Map<const Eigen::VectorXd> w(ws.data(), static_cast<Eigen::Index>(ws.size()));
  const double total = w.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "total weight must be positive");

  const Eigen::MatrixXd kx = kernel_matrix(g.xs, points, g.hx, true);
  const Eigen::MatrixXd ky = kernel_matrix(g.ys, points, g.hy, false);
  g.density = (kx * w.asDiagonal()) * ky.transpose() / total;
  g.raw_mass = g.density.sum() * g.dx * g.dy;
  if (g.raw_mass > 0.0) g.density /= g.raw_mass;
  return g;
}

}  // namespace logsift
