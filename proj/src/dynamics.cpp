#include "zd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zd/linalg.hpp"

namespace zd {
namespace {

Operator anticommutator_part(const std::vector<Operator>& collapse, std::size_t dim) {
  Operator sum(dim);
  for (const auto& l : collapse) sum += l.adjoint() * l;
  return sum;
}

void require_same_dims(const Operator& h, const std::vector<Operator>& collapse, std::size_t dim, const char* who) {
  if (h.dim() != dim) throw InvalidArgument(std::string(who) + ": Hamiltonian dimension mismatch");
  for (std::size_t j = 0; j < collapse.size(); ++j) {
    if (collapse[j].dim() != dim) {
      throw InvalidArgument(std::string(who) + ": collapse operator " + std::to_string(j) + " dimension mismatch");
    }
  }
}

void hermitize(std::span<cplx> rho, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    rho[i * dim + i] = rho[i * dim + i].real();
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx avg = 0.5 * (rho[i * dim + j] + std::conj(rho[j * dim + i]));
      rho[i * dim + j] = avg;
      rho[j * dim + i] = std::conj(avg);
    }
  }
}

Operator atomic_reduced(const Operator& rho, const SpaceLayout& layout) {
  if (layout.size() == 2) return rho;
  return partial_trace(rho, {slot::atom1, slot::atom2}, layout);
}

void require_atomic_layout(const SpaceLayout& layout, std::size_t dim, const char* who) {
  const bool shape_ok = (layout.size() == 2 || layout.size() == 3) && layout.dim(slot::atom1) == level::count &&
                        layout.dim(slot::atom2) == level::count;
  if (!shape_ok || layout.total_dim() != dim) {
    throw InvalidArgument(std::string(who) + ": state does not match a [4, 4] or [4, 4, n] layout");
  }
}

}  // namespace

Operator lindblad_apply(const Operator& h, const std::vector<Operator>& collapse, const Operator& rho) {
  const std::size_t d = rho.dim();
  require_same_dims(h, collapse, d, "lindblad_apply");
  const cplx minus_i(0.0, -1.0);
  Operator out = minus_i * (h * rho - rho * h);
  for (const auto& l : collapse) {
    const Operator ldag = l.adjoint();
    const Operator ldl = ldag * l;
    out += l * rho * ldag;
    out -= 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

LindbladRhs::LindbladRhs(const Operator& h, const std::vector<Operator>& collapse)
    : dim_(h.dim()), scratch_(h.dim() * h.dim()) {
  require_same_dims(h, collapse, dim_, "LindbladRhs");
  const cplx minus_i(0.0, -1.0);
  const Operator heff = h - cplx(0.0, 0.5) * anticommutator_part(collapse, dim_);
  minus_i_heff_ = SparseOperator(minus_i * heff);
  jumps_.reserve(collapse.size());
  for (const auto& l : collapse) jumps_.emplace_back(l);
}

void LindbladRhs::apply(std::span<const cplx> rho, std::span<cplx> out, const simd::KernelTable& k) const {
  const std::size_t d = dim_;
  if (rho.size() != d * d || out.size() != d * d) throw InvalidArgument("LindbladRhs::apply: buffer size mismatch");

  // X = -i H_eff rho; the coherent and anticommutator parts are X + X^dag.
  std::fill(scratch_.begin(), scratch_.end(), cplx(0.0));
  minus_i_heff_.multiply_add(1.0, rho, scratch_, k);
  for (std::size_t i = 0; i < d; ++i) {
    out[i * d + i] = 2.0 * scratch_[i * d + i].real();
    for (std::size_t j = i + 1; j < d; ++j) {
      const cplx v = scratch_[i * d + j] + std::conj(scratch_[j * d + i]);
      out[i * d + j] = v;
      out[j * d + i] = std::conj(v);
    }
  }

  // L rho L^dag [i, r] = sum_j L[i, j] conj((L rho)[r, j]) for hermitian rho.
  for (const auto& jump : jumps_) {
    const auto& rows = jump.occupied_rows();
    std::fill(scratch_.begin(), scratch_.begin() + rows.size() * d, cplx(0.0));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      auto z = std::span<cplx>(scratch_).subspan(a * d, d);
      for (const auto& [col, value] : jump.row(rows[a])) k.caxpy(value, rho.subspan(col * d, d), z);
    }
    for (std::size_t ia = 0; ia < rows.size(); ++ia) {
      const std::size_t i = rows[ia];
      const auto li = jump.row(i);
      for (std::size_t ra = 0; ra < rows.size(); ++ra) {
        const cplx* z = scratch_.data() + ra * d;
        cplx acc = 0.0;
        for (const auto& [col, value] : li) acc += value * std::conj(z[col]);
        out[i * d + rows[ra]] += acc;
      }
    }
  }
}

double purity(const Operator& rho) {
  const std::size_t d = rho.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += (rho(i, j) * rho(j, i)).real();
  return s;
}

double fidelity_singlet(const Operator& rho, const SpaceLayout& layout) {
  require_atomic_layout(layout, rho.dim(), "fidelity_singlet");
  const Operator atoms = atomic_reduced(rho, layout);
  return atoms.expectation(named_state(NamedState::S, layout, false)).real();
}

TrajectoryRow observables_record(const Operator& rho, const SpaceLayout& layout, double t) {
  require_atomic_layout(layout, rho.dim(), "observables_record");
  const Operator atoms = atomic_reduced(rho, layout);
  auto pop = [&](NamedState s) { return atoms.expectation(named_state(s, layout, false)).real(); };

  TrajectoryRow row;
  row.t = t;
  row.purity = purity(rho);
  row.p_S = pop(NamedState::S);
  row.fidelity_S = row.p_S;
  row.p_gg = pop(NamedState::gg);
  row.p_T = pop(NamedState::T);
  row.p_ee = pop(NamedState::ee);
  row.p_rr = pop(NamedState::rr);
  if (layout.size() == 3) {
    const Operator cav = partial_trace(rho, {slot::cavity}, layout);
    for (std::size_t n = 1; n < cav.dim(); ++n) row.n_photon += static_cast<double>(n) * cav(n, n).real();
  }
  return row;
}

void require_density_matrix(const Operator& rho, double tol) {
  if (rho.empty()) throw InvalidArgument("density matrix is empty");
  if (!rho.is_hermitian(tol)) throw InvalidArgument("density matrix is not hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw InvalidArgument("density matrix does not have unit trace");
  if (!rho.is_positive_semidefinite(tol)) throw InvalidArgument("density matrix is not positive semidefinite");
}

std::vector<Operator> evolve_states(const Operator& h, const std::vector<Operator>& collapse, const Operator& rho0,
                                    std::span<const double> sample_times, const IntegratorConfig& cfg) {
  require_density_matrix(rho0);
  if (!sample_times.empty() && sample_times.front() < 0.0) throw InvalidArgument("sample times must be >= 0");
  const LindbladRhs rhs(h, collapse);
  const std::size_t d = rho0.dim();
  Operator state = rho0;
  std::vector<Operator> out;
  out.reserve(sample_times.size());

  const ComplexRhs f = [&rhs](std::span<const cplx> y, std::span<cplx> dy) { rhs.apply(y, dy); };
  const SampleHook on_sample = [&](double, std::span<cplx> y) {
    hermitize(y, d);
    out.emplace_back(d, std::vector<cplx>(y.begin(), y.end()));
  };
  SampleHook after_step;
  if (cfg.hermitize_each_step) after_step = [d](double, std::span<cplx> y) { hermitize(y, d); };
  integrate_dopri5(f, state.data(), 0.0, sample_times, cfg, on_sample, after_step);
  return out;
}

Trajectory evolve(const Operator& h, const std::vector<Operator>& collapse, const Operator& rho0,
                  const SpaceLayout& layout, std::span<const double> sample_times, const IntegratorConfig& cfg,
                  const StateObserver& observer) {
  require_density_matrix(rho0);
  require_atomic_layout(layout, rho0.dim(), "evolve");
  if (!sample_times.empty() && sample_times.front() < 0.0) throw InvalidArgument("sample times must be >= 0");

  const LindbladRhs rhs(h, collapse);
  const std::size_t d = rho0.dim();
  Operator state = rho0;
  Trajectory traj;
  traj.rows.reserve(sample_times.size());
  Operator snapshot(d);

  const ComplexRhs f = [&rhs](std::span<const cplx> y, std::span<cplx> dy) { rhs.apply(y, dy); };
  const SampleHook on_sample = [&](double t, std::span<cplx> y) {
    hermitize(y, d);
    std::copy(y.begin(), y.end(), snapshot.data().begin());
    traj.rows.push_back(observables_record(snapshot, layout, t));
    if (observer) observer(t, snapshot);
  };
  SampleHook after_step;
  if (cfg.hermitize_each_step) after_step = [d](double, std::span<cplx> y) { hermitize(y, d); };
  traj.stats = integrate_dopri5(f, state.data(), 0.0, sample_times, cfg, on_sample, after_step);
  return traj;
}

Trajectory evolve_with_feedback(const SystemParams& p, const Operator& rho0, std::span<const double> sample_times,
                                const IntegratorConfig& cfg, const StateObserver& observer) {
  const OpenSystem sys = full_system(p, true);
  return evolve(sys.hamiltonian, sys.collapse, rho0, sys.layout, sample_times, cfg, observer);
}

std::vector<double> sample_grid(double t_max, double dt) {
  if (!(t_max >= 0.0) || !(dt > 0.0)) throw InvalidArgument("sample_grid: need t_max >= 0 and dt > 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> times;
  times.reserve(steps + 2);
  for (std::size_t k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k) * dt);
  if (t_max - times.back() > 1e-9 * std::max(1.0, t_max)) times.push_back(t_max);
  return times;
}

}  // namespace zd
