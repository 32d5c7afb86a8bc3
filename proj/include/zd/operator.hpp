#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zd {

using cplx = std::complex<double>;
using Ket = std::vector<cplx>;

/// Raised when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a result within contract.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when reading or writing a file fails.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense square complex matrix.
///
/// Entries are stored row-major: element (i, j) lives at data()[i * dim() + j].
/// All Hamiltonians, collapse operators and density matrices use this type.
class Operator {
 public:
  Operator() = default;
  explicit Operator(std::size_t dim);
  Operator(std::size_t dim, std::vector<cplx> entries);
  Operator(std::initializer_list<std::initializer_list<cplx>> rows);

  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim) { return Operator(dim); }
  /// |ket><bra|
  static Operator outer(std::span<const cplx> ket, std::span<const cplx> bra);
  static Operator projector(std::span<const cplx> ket) { return outer(ket, ket); }
  /// Single matrix unit |row><col| of dimension dim.
  static Operator unit(std::size_t dim, std::size_t row, std::size_t col);

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  cplx trace() const;
  Operator adjoint() const;
  Operator transpose() const;
  Operator conj() const;

  double frobenius_norm() const;
  double max_abs() const;

  bool is_hermitian(double tol = 1e-10) const;
  bool is_unitary(double tol = 1e-10) const;
  bool is_positive_semidefinite(double tol = 1e-10) const;

  Ket apply(std::span<const cplx> v) const;
  /// <v|A|v>
  cplx expectation(std::span<const cplx> v) const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

  bool operator==(const Operator&) const = default;

 private:
  void require_same_dim(const Operator& o, const char* what) const;

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Operator& a, const Operator& b);

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

}  // namespace zd
