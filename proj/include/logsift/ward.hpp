#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace logsift {

/// One agglomeration step. Ids below n are leaves; step s creates id n + s.
struct WardMerge {
  std::size_t left = 0;   // smaller cluster first, then smaller label key
  std::size_t right = 0;
  double height = 0.0;    // sqrt of the Lance-Williams Ward distance
  std::size_t size = 0;
};

struct Dendrogram {
  std::vector<WardMerge> merges;
  std::vector<std::size_t> leaf_order;  // original item indices
};

/// Ward linkage over the rows of `points` using squared Euclidean distances
/// and the Lance-Williams update. Ties (within a relative 1e-12) go to the
/// pair whose label keys sort first, a cluster's key being its smallest leaf
/// label, so the result does not depend on row order when labels are unique.
/// Throws Error{EmptyMatrix} for zero rows or Error{ShapeMismatch} when
/// `labels` does not have one entry per row.
Dendrogram ward_linkage(const Eigen::MatrixXd& points, const std::vector<std::string>& labels);

/// Error category x science domain counts.
struct CategoryDomainMatrix {
  std::vector<std::string> row_labels;  // categories
  std::vector<std::string> col_labels;  // domains
  Eigen::MatrixXd counts;

  /// Dense matrix over the sorted label sets of a sparse (row, col) -> count map.
  static CategoryDomainMatrix from_counts(const std::map<std::pair<std::string, std::string>, double>& cells);
};

struct ClusterResult {
  std::vector<std::size_t> row_order;
  std::vector<std::size_t> col_order;
  Dendrogram rows;
  Dendrogram cols;
  bool degenerate_rows = false;  // all rows identical after the transform
  bool degenerate_cols = false;
};

/// Applies log10(1 + x) and clusters rows and columns independently.
/// Throws Error{EmptyMatrix} if either dimension is zero and
/// Error{InvalidArgument} for negative or non-finite counts.
ClusterResult ward_cluster(const CategoryDomainMatrix& matrix);

}  // namespace logsift
