#include "logsift/ward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logsift/error.hpp"

namespace logsift {

namespace {

constexpr double kTieTolerance = 1e-12;

struct Cluster {
  std::size_t id;
  std::size_t size;
  std::size_t key;  // rank of the smallest leaf label
};

bool all_rows_equal(const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 1; r < m.rows(); ++r) {
    if (m.row(r) != m.row(0)) return false;
  }
  return true;
}

}  // namespace

Dendrogram ward_linkage(const Eigen::MatrixXd& points, const std::vector<std::string>& labels) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n == 0) throw Error(ErrorCode::EmptyMatrix, "ward linkage needs at least one item");
  if (labels.size() != n) throw Error(ErrorCode::ShapeMismatch, "one label per row required");

  // Label ranks make tie-breaking independent of input order.
  std::vector<std::size_t> by_label(n);
  for (std::size_t i = 0; i < n; ++i) by_label[i] = i;
  std::stable_sort(by_label.begin(), by_label.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[by_label[r]] = r;

  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, j) = (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j))).squaredNorm();
    }
  }

  // Slot i of `active` owns row/column i of `d`.
  std::vector<Cluster> active(n);
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) active[i] = {i, 1, rank[i]};

  Dendrogram out;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (alive[j]) best = std::min(best, d(i, j));
      }
    }
    const double cutoff = best + kTieTolerance * std::max(1.0, std::abs(best));
    std::size_t bi = n, bj = n;
    std::pair<std::size_t, std::size_t> best_key{n, n};
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j] || d(i, j) > cutoff) continue;
        const std::pair<std::size_t, std::size_t> key = std::minmax(active[i].key, active[j].key);
        if (bi == n || key < best_key) {
          best_key = key;
          bi = i;
          bj = j;
        }
      }
    }

    const Cluster a = active[bi], b = active[bj];
    const double dij = d(bi, bj);
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      const auto nk = static_cast<double>(active[k].size);
      const auto ni = static_cast<double>(a.size), nj = static_cast<double>(b.size);
      const double v = ((ni + nk) * d(bi, k) + (nj + nk) * d(bj, k) - nk * dij) / (ni + nj + nk);
      d(bi, k) = d(k, bi) = std::max(0.0, v);
    }
    alive[bj] = false;

    const bool a_first = a.size != b.size ? a.size < b.size : a.key < b.key;
    const Cluster& first = a_first ? a : b;
    const Cluster& second = a_first ? b : a;
    WardMerge m;
    m.left = first.id;
    m.right = second.id;
    m.height = std::sqrt(dij);
    m.size = a.size + b.size;
    out.merges.push_back(m);
    active[bi] = {n + step, m.size, std::min(a.key, b.key)};
  }

  // Leaf order by depth-first traversal from the root, left child first.
  if (n == 1) {
    out.leaf_order = {0};
    return out;
  }
  std::vector<std::size_t> stack{n + out.merges.size() - 1};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (node < n) {
      out.leaf_order.push_back(node);
      continue;
    }
    const WardMerge& m = out.merges[node - n];
    stack.push_back(m.right);
    stack.push_back(m.left);
  }
  return out;
}

CategoryDomainMatrix CategoryDomainMatrix::from_counts(
    const std::map<std::pair<std::string, std::string>, double>& cells) {
  CategoryDomainMatrix m;
  std::map<std::string, Eigen::Index> rows, cols;
  for (const auto& [rc, _] : cells) {
    rows.emplace(rc.first, 0);
    cols.emplace(rc.second, 0);
  }
  for (auto& [label, idx] : rows) {
    idx = static_cast<Eigen::Index>(m.row_labels.size());
    m.row_labels.push_back(label);
  }
  for (auto& [label, idx] : cols) {
    idx = static_cast<Eigen::Index>(m.col_labels.size());
    m.col_labels.push_back(label);
  }
  m.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (const auto& [rc, v] : cells) m.counts(rows[rc.first], cols[rc.second]) += v;
  return m;
}

ClusterResult ward_cluster(const CategoryDomainMatrix& matrix) {
  const Eigen::MatrixXd& c = matrix.counts;
  if (c.rows() == 0 || c.cols() == 0) throw Error(ErrorCode::EmptyMatrix, "category x domain matrix is empty");
  if (static_cast<std::size_t>(c.rows()) != matrix.row_labels.size() ||
      static_cast<std::size_t>(c.cols()) != matrix.col_labels.size()) {
    throw Error(ErrorCode::ShapeMismatch, "label counts do not match matrix shape");
  }
  if (!c.allFinite() || (c.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "counts must be finite and non-negative");
  }
  const Eigen::MatrixXd t = c.array().log1p() / std::log(10.0);
  ClusterResult r;
  r.rows = ward_linkage(t, matrix.row_labels);
  r.cols = ward_linkage(t.transpose(), matrix.col_labels);
  r.row_order = r.rows.leaf_order;
  r.col_order = r.cols.leaf_order;
  r.degenerate_rows = all_rows_equal(t);
  r.degenerate_cols = all_rows_equal(t.transpose());
  return r;
}

}  // namespace logsift
