#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "zd/operator.hpp"

namespace zd::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return dist_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  cplx complex() { return {normal(), normal()}; }

  Operator matrix(std::size_t d) {
    Operator m(d);
    for (auto& x : m.data()) x = complex();
    return m;
  }
  Operator hermitian(std::size_t d) {
    const Operator m = matrix(d);
    return 0.5 * (m + m.adjoint());
  }
  /// Random full-rank density matrix A A^dag / Tr.
  Operator density(std::size_t d) {
    const Operator m = matrix(d);
    Operator rho = m * m.adjoint();
    rho *= 1.0 / rho.trace().real();
    return rho;
  }
  Ket ket(std::size_t d) {
    Ket v(d);
    for (auto& x : v) x = complex();
    const double n = norm(v);
    for (auto& x : v) x /= n;
    return v;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

/// (A (x) B)[i dB + k, j dB + l] = A[i, j] B[k, l], four explicit loops.
inline Operator brute_kron(const Operator& a, const Operator& b) {
  const std::size_t da = a.dim(), db = b.dim();
  Operator out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = a(i, j) * b(k, l);
  return out;
}

/// exp(M) by scaling and squaring of a plain Taylor series.
inline Operator taylor_expm(const Operator& m) {
  int squarings = 0;
  double scale = 1.0;
  while (m.frobenius_norm() * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Operator a = m * cplx(scale);
  Operator term = Operator::identity(m.dim());
  Operator sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a;
    term *= 1.0 / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline double max_abs(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace zd::testing
