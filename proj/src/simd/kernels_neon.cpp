// aarch64 variant. Advanced SIMD is architecturally mandatory there, so the
// runtime check in dispatch.cpp is trivially true.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "zd/simd/kernels.hpp"

namespace zd::simd {
namespace {

// One complex double per float64x2_t.

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const double* xs = reinterpret_cast<const double*>(x.data());
  double* ys = reinterpret_cast<double*>(y.data());
  const float64x2_t ar = vdupq_n_f64(a.real());
  const float64x2_t ai = {-a.imag(), a.imag()};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const float64x2_t xv = vld1q_f64(xs + 2 * i);
    const float64x2_t xswap = vextq_f64(xv, xv, 1);
    float64x2_t yv = vld1q_f64(ys + 2 * i);
    yv = vfmaq_f64(yv, ar, xv);
    yv = vfmaq_f64(yv, ai, xswap);
    vst1q_f64(ys + 2 * i, yv);
  }
}

void lincomb(std::span<const cplx> base, std::span<const double> coeffs, std::span<const cplx* const> terms,
             std::span<cplx> out) {
  const double* b = reinterpret_cast<const double*>(base.data());
  double* o = reinterpret_cast<double*>(out.data());
  for (std::size_t i = 0; i < base.size(); ++i) {
    float64x2_t acc = vld1q_f64(b + 2 * i);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const double* t = reinterpret_cast<const double*>(terms[j]);
      acc = vfmaq_n_f64(acc, vld1q_f64(t + 2 * i), coeffs[j]);
    }
    vst1q_f64(o + 2 * i, acc);
  }
}

double scaled_err_sq(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1, double atol,
                     double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double e2 = std::norm(err[i]);
    const double sc = atol + rtol * std::sqrt(std::max(std::norm(y0[i]), std::norm(y1[i])));
    sum += e2 / (sc * sc);
  }
  return sum;
}

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  const double* xs = reinterpret_cast<const double*>(x.data());
  const double* ys = reinterpret_cast<const double*>(y.data());
  float64x2_t re = vdupq_n_f64(0.0);
  float64x2_t im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const float64x2_t xv = vld1q_f64(xs + 2 * i);
    const float64x2_t yv = vld1q_f64(ys + 2 * i);
    re = vfmaq_f64(re, xv, yv);
    im = vfmaq_f64(im, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(re, 0) + vgetq_lane_f64(re, 1), vgetq_lane_f64(im, 0) - vgetq_lane_f64(im, 1)};
}

void dgemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double* row = a.data() + i * cols;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2) acc = vfmaq_f64(acc, vld1q_f64(row + j), vld1q_f64(x.data() + j));
    double s = vaddvq_f64(acc);
    for (; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{"neon", caxpy, lincomb, scaled_err_sq, dotc, dgemv};
  return table;
}

}  // namespace zd::simd
