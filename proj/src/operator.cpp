#include "zd/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zd/layout.hpp"
#include "zd/linalg.hpp"

namespace zd {

Operator::Operator(std::size_t dim) : dim_(dim), data_(dim * dim) {}

Operator::Operator(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim * dim) {
    throw InvalidArgument("Operator: expected " + std::to_string(dim * dim) + " entries, got " +
                          std::to_string(data_.size()));
  }
}

Operator::Operator(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw InvalidArgument("Operator: rows must form a square matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Operator Operator::identity(std::size_t dim) {
  Operator out(dim);
  for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
  return out;
}

Operator Operator::outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  if (ket.size() != bra.size()) throw InvalidArgument("Operator::outer: ket/bra size mismatch");
  Operator out(ket.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) out(i, j) = ket[i] * std::conj(bra[j]);
  return out;
}

Operator Operator::unit(std::size_t dim, std::size_t row, std::size_t col) {
  if (row >= dim || col >= dim) throw InvalidArgument("Operator::unit: index out of range");
  Operator out(dim);
  out(row, col) = 1.0;
  return out;
}

cplx Operator::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Operator Operator::adjoint() const {
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Operator Operator::transpose() const {
  Operator out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Operator Operator::conj() const {
  Operator out(*this);
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

double Operator::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double Operator::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool Operator::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

bool Operator::is_unitary(double tol) const {
  const Operator prod = adjoint() * (*this);
  return max_abs_diff(prod, identity(dim_)) <= tol;
}

bool Operator::is_positive_semidefinite(double tol) const {
  if (!is_hermitian(std::max(tol, 1e-12))) return false;
  const auto vals = hermitian_eigenvalues(*this);
  return vals.empty() || vals.front() >= -tol;
}

Ket Operator::apply(std::span<const cplx> v) const {
  if (v.size() != dim_) throw InvalidArgument("Operator::apply: vector size mismatch");
  Ket out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    cplx acc = 0.0;
    const cplx* row = &data_[i * dim_];
    for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

cplx Operator::expectation(std::span<const cplx> v) const { return inner(v, apply(v)); }

void Operator::require_same_dim(const Operator& o, const char* what) const {
  if (o.dim_ != dim_) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(dim_) +
                          " vs " + std::to_string(o.dim_) + ")");
  }
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_dim(o, "Operator::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_dim(o, "Operator::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  a.require_same_dim(b, "Operator::operator*");
  const std::size_t n = a.dim_;
  Operator out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* orow = &out.data_[i * n];
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a.data_[i * n + k];
      if (aik == cplx(0.0)) continue;
      const cplx* brow = &b.data_[k * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) m = std::max(m, std::abs(da[k] - db[k]));
  return m;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw InvalidArgument("inner: size mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// SpaceLayout ---------------------------------------------------------------

SpaceLayout::SpaceLayout(std::initializer_list<std::size_t> dims) : SpaceLayout(std::vector<std::size_t>(dims)) {}

SpaceLayout::SpaceLayout(std::vector<std::size_t> dims) : dims_(std::move(dims)), total_(1) {
  if (dims_.empty()) throw InvalidArgument("SpaceLayout: at least one subsystem required");
  for (auto d : dims_) {
    if (d == 0) throw InvalidArgument("SpaceLayout: subsystem dimensions must be positive");
    total_ *= d;
  }
}

SpaceLayout SpaceLayout::atoms_and_cavity(std::size_t fock_cutoff) {
  return SpaceLayout{level::count, level::count, fock_cutoff + 1};
}

SpaceLayout SpaceLayout::atoms_only() { return SpaceLayout{level::count, level::count}; }

std::size_t SpaceLayout::flat_index(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != dims_.size()) throw InvalidArgument("SpaceLayout::flat_index: wrong number of indices");
  std::size_t flat = 0;
  std::size_t k = 0;
  for (auto i : idx) {
    if (i >= dims_[k]) throw InvalidArgument("SpaceLayout::flat_index: index out of range");
    flat = flat * dims_[k] + i;
    ++k;
  }
  return flat;
}

}  // namespace zd
