#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace logsift {

struct WeightedPoint {
  double x = 0.0;  // sender id
  double y = 0.0;  // receiver id
  double w = 1.0;
};

struct KdeOptions {
  int nx = 64;
  int ny = 64;
  std::optional<double> hx;  // Silverman when unset
  std::optional<double> hy;
  /// {x_min, x_max, y_min, y_max}; default pads the data range by 4 bandwidths.
  std::optional<std::array<double, 4>> bounds;
};

struct KdeGrid {
  std::vector<double> xs;  // cell centres
  std::vector<double> ys;
  Eigen::MatrixXd density;  // nx x ny, density(i, j) at (xs[i], ys[j])
  double hx = 0.0;
  double hy = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double raw_mass = 0.0;  // Riemann sum before normalisation

  double mass() const { return density.sum() * dx * dy; }
};

/// Weighted Silverman rule 0.9 * min(sd, IQR / 1.34) * n_eff^(-1/5), with
/// n_eff = (sum w)^2 / sum w^2. Falls back to whichever spread is positive,
/// then to 1.0 when all values coincide.
double silverman_bandwidth(std::span<const double> values, std::span<const double> weights);

/// Gaussian product-kernel density on a cell-centred grid, normalised so the
/// Riemann sum times the cell area is 1. Throws Error{EmptyInput} for no
/// points and Error{InvalidArgument} for nx or ny below 2, non-positive
/// bandwidths, negative weights or zero total weight.
KdeGrid kde_density(std::span<const WeightedPoint> points, const KdeOptions& options = {});

}  // namespace logsift
