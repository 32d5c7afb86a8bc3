#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zd/operator.hpp"
#include "zd/simd/kernels.hpp"

namespace zd {

/// Compressed-row complex matrix. Built from a dense Operator by dropping
/// exact zeros; the model operators are single-transition matrix units, so
/// they are very sparse.
class SparseOperator {
 public:
  struct Entry {
    std::size_t col;
    cplx value;
  };

  SparseOperator() = default;
  explicit SparseOperator(const Operator& dense);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }

  /// Entries of one row.
  std::span<const Entry> row(std::size_t r) const {
    return {entries_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  /// Rows holding at least one entry, ascending.
  const std::vector<std::size_t>& occupied_rows() const { return occupied_; }

  Operator to_dense() const;

  /// out += alpha * (this * in), with in and out row-major dim x dim.
  void multiply_add(cplx alpha, std::span<const cplx> in, std::span<cplx> out, const simd::KernelTable& k) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> occupied_;
};

}  // namespace zd
