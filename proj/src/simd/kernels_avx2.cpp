// Compiled with -mavx2 -mfma. Nothing in this file may run before the CPU
// check in dispatch.cpp has confirmed support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "zd/simd/kernels.hpp"

namespace zd::simd {
namespace {

// Two complex doubles per __m256d, interleaved (re0, im0, re1, im1).

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = x.size();
  const double* xs = reinterpret_cast<const double*>(x.data());
  double* ys = reinterpret_cast<double*>(y.data());
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d xswap = _mm256_permute_pd(xv, 0b0101);
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xswap));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i];
    const double xi = xs[2 * i + 1];
    ys[2 * i] += a.real() * xr - a.imag() * xi;
    ys[2 * i + 1] += a.real() * xi + a.imag() * xr;
  }
}

void lincomb(std::span<const cplx> base, std::span<const double> coeffs, std::span<const cplx* const> terms,
             std::span<cplx> out) {
  const std::size_t n = 2 * base.size();
  const std::size_t m = coeffs.size();
  const double* b = reinterpret_cast<const double*>(base.data());
  double* o = reinterpret_cast<double*>(out.data());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(b + i);
    for (std::size_t j = 0; j < m; ++j) {
      const double* t = reinterpret_cast<const double*>(terms[j]);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[j]), _mm256_loadu_pd(t + i), acc);
    }
    _mm256_storeu_pd(o + i, acc);
  }
  for (; i < n; ++i) {
    double acc = b[i];
    for (std::size_t j = 0; j < m; ++j) acc += coeffs[j] * reinterpret_cast<const double*>(terms[j])[i];
    o[i] = acc;
  }
}

inline __m256d squared_moduli(const double* p) {
  // Four complex numbers -> |z0|^2, |z2|^2, |z1|^2, |z3|^2 (lane order is
  // irrelevant as long as every operand uses the same permutation).
  const __m256d lo = _mm256_loadu_pd(p);
  const __m256d hi = _mm256_loadu_pd(p + 4);
  return _mm256_hadd_pd(_mm256_mul_pd(lo, lo), _mm256_mul_pd(hi, hi));
}

double scaled_err_sq(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1, double atol,
                     double rtol) {
  const std::size_t n = err.size();
  const double* e = reinterpret_cast<const double*>(err.data());
  const double* a = reinterpret_cast<const double*>(y0.data());
  const double* b = reinterpret_cast<const double*>(y1.data());
  const __m256d va = _mm256_set1_pd(atol);
  const __m256d vr = _mm256_set1_pd(rtol);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e2 = squared_moduli(e + 2 * i);
    const __m256d m2 = _mm256_max_pd(squared_moduli(a + 2 * i), squared_moduli(b + 2 * i));
    const __m256d sc = _mm256_fmadd_pd(vr, _mm256_sqrt_pd(m2), va);
    acc = _mm256_add_pd(acc, _mm256_div_pd(e2, _mm256_mul_pd(sc, sc)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double e2 = std::norm(err[i]);
    const double sc = atol + rtol * std::sqrt(std::max(std::norm(y0[i]), std::norm(y1[i])));
    sum += e2 / (sc * sc);
  }
  return sum;
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  const std::size_t n = x.size();
  const double* xs = reinterpret_cast<const double*>(x.data());
  const double* ys = reinterpret_cast<const double*>(y.data());
  __m256d re = _mm256_setzero_pd();  // accumulates (xr*yr, xi*yi)
  __m256d im = _mm256_setzero_pd();  // accumulates (xr*yi, xi*yr)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    re = _mm256_fmadd_pd(xv, yv, re);
    im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), im);
  }
  alignas(32) double r[4];
  alignas(32) double m[4];
  _mm256_store_pd(r, re);
  _mm256_store_pd(m, im);
  double sre = (r[0] + r[1]) + (r[2] + r[3]);
  double sim = (m[0] - m[1]) + (m[2] - m[3]);
  for (; i < n; ++i) {
    sre += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    sim += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {sre, sim};
}

void dgemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  const double* xs = x.data();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double* row = a.data() + i * cols;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= cols; j += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(xs + j), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j + 4), _mm256_loadu_pd(xs + j + 4), acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; j < cols; ++j) acc += row[j] * xs[j];
    y[i] = acc;
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2", caxpy, lincomb, scaled_err_sq, dotc, dgemv};
  return table;
}

}  // namespace zd::simd
