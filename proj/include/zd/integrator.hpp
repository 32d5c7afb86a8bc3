#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

#include "zd/operator.hpp"

namespace zd {

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Upper bound on the internal step; infinity means unbounded.
  double max_step = std::numeric_limits<double>::infinity();
  /// Replace rho by (rho + rho^dagger) / 2 after every accepted step instead of
  /// only at sample points.
  bool hermitize_each_step = false;

  void validate() const;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// dy/dt = f(y) for a flat complex state; f writes into its second argument.
using ComplexRhs = std::function<void(std::span<const cplx>, std::span<cplx>)>;

/// Called at each sample time with the state; may modify the state in place
/// (used for hermitization).
using SampleHook = std::function<void(double, std::span<cplx>)>;

/// Dormand-Prince 5(4) with FSAL and a PI step-size controller. The state is
/// advanced from t0 through every entry of sample_times (ascending, each
/// >= t0), landing on each one exactly.
///
/// Throws SolverError on step-size underflow.
IntegratorStats integrate_dopri5(const ComplexRhs& rhs, std::span<cplx> y, double t0,
                                 std::span<const double> sample_times, const IntegratorConfig& cfg,
                                 const SampleHook& on_sample, const SampleHook& after_step = {});

}  // namespace zd
