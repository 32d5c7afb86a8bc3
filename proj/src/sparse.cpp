#include "zd/sparse.hpp"

namespace zd {

SparseOperator::SparseOperator(const Operator& dense) : dim_(dense.dim()), row_ptr_(dense.dim() + 1, 0) {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const cplx v = dense(i, j);
      if (v != cplx(0.0)) entries_.push_back({j, v});
    }
    row_ptr_[i + 1] = entries_.size();
    if (row_ptr_[i + 1] > row_ptr_[i]) occupied_.push_back(i);
  }
}

Operator SparseOperator::to_dense() const {
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (const auto& [col, value] : row(i)) out(i, col) = value;
  return out;
}

void SparseOperator::multiply_add(cplx alpha, std::span<const cplx> in, std::span<cplx> out,
                                  const simd::KernelTable& k) const {
  if (in.size() != dim_ * dim_ || out.size() != dim_ * dim_) {
    throw InvalidArgument("SparseOperator::multiply_add: buffer size mismatch");
  }
  for (std::size_t r : occupied_) {
    auto dst = out.subspan(r * dim_, dim_);
    for (const auto& [col, value] : row(r)) k.caxpy(alpha * value, in.subspan(col * dim_, dim_), dst);
  }
}

}  // namespace zd
