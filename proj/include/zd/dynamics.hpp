#pragma once

#include <functional>
#include <span>
#include <vector>

#include "zd/integrator.hpp"
#include "zd/layout.hpp"
#include "zd/model.hpp"
#include "zd/operator.hpp"
#include "zd/sparse.hpp"

namespace zd {

/// Reference Lindblad generator on dense matrices:
///   -i[H, rho] + sum_j L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho}.
/// Valid for any rho, hermitian or not.
Operator lindblad_apply(const Operator& h, const std::vector<Operator>& collapse, const Operator& rho);

/// Fast generator used by the integrator. Precomputes the non-hermitian
/// effective Hamiltonian H - i/2 sum L^dag L in sparse form and assumes rho is
/// hermitian, which lets it form -i H_eff rho once and add its adjoint.
class LindbladRhs {
 public:
  LindbladRhs(const Operator& h, const std::vector<Operator>& collapse);

  std::size_t dim() const { return dim_; }

  /// out = L(rho) for row-major dim x dim buffers.
  void apply(std::span<const cplx> rho, std::span<cplx> out, const simd::KernelTable& k) const;
  void apply(std::span<const cplx> rho, std::span<cplx> out) const { apply(rho, out, simd::active_kernels()); }

 private:
  std::size_t dim_;
  SparseOperator minus_i_heff_;
  std::vector<SparseOperator> jumps_;
  mutable std::vector<cplx> scratch_;
};

/// One sampled row of observables.
struct TrajectoryRow {
  double t = 0.0;
  double purity = 0.0;
  double fidelity_S = 0.0;
  double p_gg = 0.0;
  double p_T = 0.0;
  double p_S = 0.0;
  double p_ee = 0.0;
  double p_rr = 0.0;
  double n_photon = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  IntegratorStats stats;
};

/// Tr(rho^2).
double purity(const Operator& rho);

/// <S| Tr_cavity(rho) |S>. Accepts full [4,4,n] or atomic [4,4] layouts.
double fidelity_singlet(const Operator& rho, const SpaceLayout& layout);

/// Observables of one state: purity, singlet fidelity, populations of
/// |gg>, |T>, |S>, |ee>, |rr> on the atomic reduced state, and the mean photon
/// number (zero for atomic layouts).
TrajectoryRow observables_record(const Operator& rho, const SpaceLayout& layout, double t = 0.0);

/// Throws InvalidArgument unless rho is hermitian, unit trace and positive
/// semidefinite within tol.
void require_density_matrix(const Operator& rho, double tol = 1e-10);

/// Called at every sample with the (hermitized) state.
using StateObserver = std::function<void(double, const Operator&)>;

/// Integrates the master equation from t = 0 and records observables at each
/// sample time. sample_times must be increasing and start at >= 0.
Trajectory evolve(const Operator& h, const std::vector<Operator>& collapse, const Operator& rho0,
                  const SpaceLayout& layout, std::span<const double> sample_times, const IntegratorConfig& cfg = {},
                  const StateObserver& observer = {});

/// Raw state evolution without observables: returns rho at each sample time.
std::vector<Operator> evolve_states(const Operator& h, const std::vector<Operator>& collapse, const Operator& rho0,
                                    std::span<const double> sample_times, const IntegratorConfig& cfg = {});

/// Full model with the cavity jump sqrt(kappa) a replaced by
/// sqrt(kappa) U_fb a. Requires kappa > 0.
Trajectory evolve_with_feedback(const SystemParams& p, const Operator& rho0, std::span<const double> sample_times,
                                const IntegratorConfig& cfg = {}, const StateObserver& observer = {});

/// Evenly spaced samples 0, dt, 2 dt, ..., up to and including t_max.
std::vector<double> sample_grid(double t_max, double dt);

}  // namespace zd
