#pragma once

// Zero-copy views of library types as Eigen matrices. Internal to zd_core.

#include <Eigen/Dense>

#include "zd/operator.hpp"

namespace zd::detail {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RVector = Eigen::VectorXd;

inline Eigen::Map<const CMatrix> view(const Operator& op) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  return {op.data().data(), n, n};
}

inline Eigen::Map<CMatrix> view(Operator& op) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  return {op.data().data(), n, n};
}

inline Operator to_operator(const CMatrix& m) {
  Operator out(static_cast<std::size_t>(m.rows()));
  view(out) = m;
  return out;
}

}  // namespace zd::detail
