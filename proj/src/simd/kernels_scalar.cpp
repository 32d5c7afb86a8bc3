#include <algorithm>
#include <cmath>

#include "zd/simd/kernels.hpp"

namespace zd::simd {
namespace {

// Plain real arithmetic: std::complex multiplication carries NaN/inf recovery
// branches that we do not want in the reference loops.

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const double ar = a.real();
  const double ai = a.imag();
  const double* xs = reinterpret_cast<const double*>(x.data());
  double* ys = reinterpret_cast<double*>(y.data());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = xs[2 * i];
    const double xi = xs[2 * i + 1];
    ys[2 * i] += ar * xr - ai * xi;
    ys[2 * i + 1] += ar * xi + ai * xr;
  }
}

void lincomb(std::span<const cplx> base, std::span<const double> coeffs, std::span<const cplx* const> terms,
             std::span<cplx> out) {
  const std::size_t n = 2 * base.size();
  const double* b = reinterpret_cast<const double*>(base.data());
  double* o = reinterpret_cast<double*>(out.data());
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[i];
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * reinterpret_cast<const double*>(terms[j])[i];
    o[i] = acc;
  }
}

double scaled_err_sq(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1, double atol,
                     double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double e2 = err[i].real() * err[i].real() + err[i].imag() * err[i].imag();
    const double a2 = y0[i].real() * y0[i].real() + y0[i].imag() * y0[i].imag();
    const double b2 = y1[i].real() * y1[i].real() + y1[i].imag() * y1[i].imag();
    const double sc = atol + rtol * std::sqrt(std::max(a2, b2));
    sum += e2 / (sc * sc);
  }
  return sum;
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void dgemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double* row = a.data() + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", caxpy, lincomb, scaled_err_sq, dotc, dgemv};
  return table;
}

}  // namespace zd::simd
