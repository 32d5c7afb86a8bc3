#pragma once

// Data-parallel inner loops of the time integrator.
//
// Every kernel has a portable scalar reference implementation. Vector variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled into separate translation
// units and selected once at runtime. Vector and scalar results agree to
// rounding; they are not bit-identical because FMA contracts differently.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace zd::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  /// y += a * x
  void (*caxpy)(cplx a, std::span<const cplx> x, std::span<cplx> y);

  /// out = base + sum_j coeffs[j] * terms[j]
  void (*lincomb)(std::span<const cplx> base, std::span<const double> coeffs,
                  std::span<const cplx* const> terms, std::span<cplx> out);

  /// sum_i (|err_i| / (atol + rtol * max(|y0_i|, |y1_i|)))^2
  double (*scaled_err_sq)(std::span<const cplx> err, std::span<const cplx> y0, std::span<const cplx> y1,
                          double atol, double rtol);

  /// sum_i conj(x_i) * y_i
  cplx (*dotc)(std::span<const cplx> x, std::span<const cplx> y);

  /// y = A x for a row-major real matrix with y.size() rows and x.size() columns.
  void (*dgemv)(std::span<const double> a, std::span<const double> x, std::span<double> y);
};

const KernelTable& scalar_kernels();

/// Vector kernels compiled for this target and supported by the running CPU,
/// or nullptr.
const KernelTable* vector_kernels();

/// Kernel table used by the library. Defaults to the vector table when
/// available; the environment variable ZD_SIMD=scalar forces the reference.
const KernelTable& active_kernels();

/// Override the active table (tests and benchmarks).
void set_active_kernels(const KernelTable& table);

}  // namespace zd::simd
