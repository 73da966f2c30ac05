#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/LU>

#include "logsift/error.hpp"

namespace logsift {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Low-rank adapter: A is d x r, B is r x k, scaled by alpha / r.
template <typename Scalar>
struct LoraAdapter {
  RowMatrix<Scalar> a;
  RowMatrix<Scalar> b;
  Scalar alpha = Scalar(1);

  Eigen::Index rank() const { return a.cols(); }

  /// Throws Error{ShapeMismatch} or Error{InvalidArgument}.
  void validate() const {
    if (a.cols() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "A columns must equal B rows");
    if (rank() < 1) throw Error(ErrorCode::ShapeMismatch, "rank must be at least 1");
    if (rank() > std::min(a.rows(), b.cols())) {
      throw Error(ErrorCode::ShapeMismatch, "rank exceeds min(d, k)");
    }
    if (!(alpha > Scalar(0))) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    if (!a.allFinite() || !b.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite adapter entry");
  }
};

/// (alpha / r) * A * B
template <typename Scalar>
RowMatrix<Scalar> lora_delta(const LoraAdapter<Scalar>& adapter) {
  adapter.validate();
  const Scalar scale = adapter.alpha / static_cast<Scalar>(adapter.rank());
  return scale * (adapter.a * adapter.b);
}

/// W0 + delta; W0 is taken by const reference and never modified.
template <typename Scalar>
RowMatrix<Scalar> lora_apply(const RowMatrix<Scalar>& w0, const LoraAdapter<Scalar>& adapter) {
  if (w0.rows() != adapter.a.rows() || w0.cols() != adapter.b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "W0 must be d x k");
  }
  return w0 + lora_delta(adapter);
}

/// Numerical rank by full-pivot LU with an absolute pivot threshold.
template <typename Scalar>
Eigen::Index numerical_rank(const RowMatrix<Scalar>& m, double tolerance = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<RowMatrix<Scalar>> lu(m);
  const auto& u = lu.matrixLU();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < std::min(m.rows(), m.cols()); ++i) {
    if (std::abs(u(i, i)) > tolerance) ++r;
  }
  return r;
}

}  // namespace logsift
