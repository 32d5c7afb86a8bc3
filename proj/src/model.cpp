#include "zd/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zd/linalg.hpp"

namespace zd {
namespace {

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be a finite non-negative rate, got " + std::to_string(v));
  }
}

void require_full_layout(const SpaceLayout& layout, const char* who) {
  if (layout.size() != 3 || layout.dim(slot::atom1) != level::count || layout.dim(slot::atom2) != level::count) {
    throw InvalidArgument(std::string(who) + ": layout must be [4, 4, fock_cutoff + 1]");
  }
}

/// |row><col| on one atom, embedded at `atom`.
Operator sigma(std::size_t row, std::size_t col, std::size_t atom, const SpaceLayout& layout) {
  return embed(Operator::unit(level::count, row, col), atom, layout);
}

Operator hc(const Operator& op) { return op + op.adjoint(); }

Ket atomic_basis(std::size_t l1, std::size_t l2) {
  Ket k(level::count * level::count);
  k[l1 * level::count + l2] = 1.0;
  return k;
}

/// (a + sign b) / sqrt(2)
Ket combine(const Ket& a, const Ket& b, double sign) {
  Ket out(a.size());
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * (a[i] + sign * b[i]);
  return out;
}

Ket atomic_state(NamedState s) {
  using level::e, level::g, level::r;
  constexpr std::size_t p = level::p;
  switch (s) {
    case NamedState::S: return combine(atomic_basis(e, g), atomic_basis(g, e), -1.0);
    case NamedState::T: return combine(atomic_basis(e, g), atomic_basis(g, e), +1.0);
    case NamedState::D: return combine(atomic_basis(p, g), atomic_basis(g, p), -1.0);
    case NamedState::B: return combine(atomic_basis(p, e), atomic_basis(e, p), -1.0);
    case NamedState::gg: return atomic_basis(g, g);
    case NamedState::ee: return atomic_basis(e, e);
    case NamedState::rr: return atomic_basis(r, r);
  }
  throw InvalidArgument("named_state: unhandled state");
}

}  // namespace

void SystemParams::validate() const {
  require_non_negative(g, "g");
  require_non_negative(omega_a, "omega_a");
  require_non_negative(omega_mw, "omega_mw");
  require_non_negative(omega_b, "omega_b");
  require_non_negative(delta, "delta");
  require_non_negative(gamma, "gamma");
  require_non_negative(gamma_r, "gamma_r");
  require_non_negative(kappa, "kappa");
  if (!std::isfinite(u_rr_deviation)) throw InvalidArgument("u_rr_deviation must be finite");
  if (!std::isfinite(eta)) throw InvalidArgument("eta must be finite");
  if (omega_b > 0.0 && delta <= 0.0) {
    throw InvalidArgument("delta must be positive when omega_b > 0 (lambda = 2 omega_b^2 / delta)");
  }
}

DerivedParams derived_params(const SystemParams& params) {
  params.validate();
  DerivedParams d;
  d.lambda = params.omega_b > 0.0 ? 2.0 * params.omega_b * params.omega_b / params.delta : 0.0;
  if (params.omega_a > 0.0) d.zeno_ratio = params.g / params.omega_a;
  if (params.kappa * params.gamma > 0.0) d.cooperativity = params.g * params.g / (params.kappa * params.gamma);
  d.u_rr = 2.0 * params.delta - d.lambda + params.u_rr_deviation;
  return d;
}

Operator annihilation(std::size_t cutoff) {
  Operator a(cutoff + 1);
  for (std::size_t n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Operator build_full_hamiltonian(const SystemParams& params, const SpaceLayout& layout) {
  require_full_layout(layout, "build_full_hamiltonian");
  const DerivedParams d = derived_params(params);
  using level::e, level::g, level::r;
  constexpr std::size_t p = level::p;

  const Operator a = embed(annihilation(layout.dim(slot::cavity) - 1), slot::cavity, layout);

  Operator h(layout.total_dim());
  for (std::size_t atom : {slot::atom1, slot::atom2}) {
    const double pump_sign = atom == slot::atom1 ? 1.0 : -1.0;
    h += (pump_sign * params.omega_a) * hc(sigma(p, e, atom, layout));
    h += params.g * hc(sigma(p, g, atom, layout) * a);
    h += params.omega_mw * hc(sigma(g, e, atom, layout));
    h += params.omega_b * hc(sigma(e, r, atom, layout));
    // A single Rydberg excitation sits at -delta in the frame rotating with
    // the Rydberg pump.
    h -= params.delta * sigma(r, r, atom, layout);
    // The pump light-shifts |e> up by omega_b^2 / delta. The microwave is taken
    // resonant with the shifted line, which removes that shift in its frame.
    if (params.omega_b > 0.0) h -= (params.omega_b * params.omega_b / params.delta) * sigma(e, e, atom, layout);
  }

  // |rr> carries U_rr - 2 delta = u_rr_deviation - lambda. It is written
  // directly rather than accumulated from the single-atom terms so that the
  // antiblockade point gives exactly -lambda.
  const cplx rr_energy = params.u_rr_deviation - d.lambda;
  for (std::size_t n = 0; n < layout.dim(slot::cavity); ++n) {
    const std::size_t idx = layout.flat_index({r, r, n});
    h(idx, idx) = rr_energy;
  }
  return h;
}

Operator build_full_hamiltonian(const SystemParams& params) {
  return build_full_hamiltonian(params, SpaceLayout::atoms_and_cavity(params.fock_cutoff));
}

std::vector<Operator> build_full_collapse_ops(const SystemParams& params, const SpaceLayout& layout) {
  require_full_layout(layout, "build_full_collapse_ops");
  params.validate();
  using level::e, level::g, level::r;
  constexpr std::size_t p = level::p;

  std::vector<Operator> ops;
  for (std::size_t atom : {slot::atom1, slot::atom2}) {
    if (params.gamma > 0.0) {
      const double amp = std::sqrt(params.gamma / 2.0);
      ops.push_back(amp * sigma(g, p, atom, layout));
      ops.push_back(amp * sigma(e, p, atom, layout));
    }
    if (params.gamma_r > 0.0) {
      const double amp = std::sqrt(params.gamma_r / 2.0);
      ops.push_back(amp * sigma(g, r, atom, layout));
      ops.push_back(amp * sigma(e, r, atom, layout));
    }
  }
  if (params.kappa > 0.0) {
    ops.push_back(std::sqrt(params.kappa) * embed(annihilation(layout.dim(slot::cavity) - 1), slot::cavity, layout));
  }
  return ops;
}

std::vector<Operator> build_full_collapse_ops(const SystemParams& params) {
  return build_full_collapse_ops(params, SpaceLayout::atoms_and_cavity(params.fock_cutoff));
}

EffectiveModel build_effective_model(const SystemParams& params) {
  const DerivedParams d = derived_params(params);
  const SpaceLayout atoms = SpaceLayout::atoms_only();
  using level::e, level::g, level::r;

  const Ket s = atomic_state(NamedState::S);
  const Ket t = atomic_state(NamedState::T);
  const Ket dk = atomic_state(NamedState::D);
  const Ket gg = atomic_state(NamedState::gg);
  const Ket ee = atomic_state(NamedState::ee);
  const Ket rr = atomic_state(NamedState::rr);

  EffectiveModel m;
  m.hamiltonian = params.omega_a * hc(Operator::outer(t, dk));
  for (std::size_t atom : {slot::atom1, slot::atom2}) m.hamiltonian += params.omega_mw * hc(sigma(g, e, atom, atoms));
  m.hamiltonian += d.lambda * hc(Operator::outer(ee, rr));
  if (params.u_rr_deviation != 0.0) m.hamiltonian += params.u_rr_deviation * Operator::projector(rr);

  if (params.gamma > 0.0) {
    m.collapse.push_back(std::sqrt(params.gamma / 4.0) * Operator::outer(s, dk));
    m.collapse.push_back(std::sqrt(params.gamma / 4.0) * Operator::outer(t, dk));
    m.collapse.push_back(std::sqrt(params.gamma / 2.0) * Operator::outer(gg, dk));
  }
  return m;
}

Operator feedback_unitary(double eta, const SpaceLayout& layout) {
  require_full_layout(layout, "feedback_unitary");
  using level::e, level::g;
  const Operator flip = hc(Operator::unit(level::count, e, g));
  const Operator u_atom = unitary_from_generator(eta * flip);
  return embed(u_atom, slot::atom1, layout);
}

Operator build_feedback_jump(const SystemParams& params, const SpaceLayout& layout) {
  params.validate();
  if (!(params.kappa > 0.0)) throw InvalidArgument("build_feedback_jump: kappa must be positive");
  const Operator a = embed(annihilation(layout.dim(slot::cavity) - 1), slot::cavity, layout);
  return std::sqrt(params.kappa) * (feedback_unitary(params.eta, layout) * a);
}

std::vector<Operator> build_feedback_collapse_ops(const SystemParams& params, const SpaceLayout& layout) {
  if (!(params.kappa > 0.0)) throw InvalidArgument("feedback requires kappa > 0");
  SystemParams no_cavity = params;
  no_cavity.kappa = 0.0;
  std::vector<Operator> ops = build_full_collapse_ops(no_cavity, layout);
  ops.push_back(build_feedback_jump(params, layout));
  return ops;
}

OpenSystem full_system(const SystemParams& params, bool feedback) {
  OpenSystem sys;
  sys.layout = SpaceLayout::atoms_and_cavity(params.fock_cutoff);
  sys.hamiltonian = build_full_hamiltonian(params, sys.layout);
  sys.collapse = feedback ? build_feedback_collapse_ops(params, sys.layout) : build_full_collapse_ops(params, sys.layout);
  return sys;
}

OpenSystem effective_system(const SystemParams& params) {
  EffectiveModel m = build_effective_model(params);
  return {SpaceLayout::atoms_only(), std::move(m.hamiltonian), std::move(m.collapse)};
}

std::string_view to_string(NamedState s) {
  switch (s) {
    case NamedState::S: return "S";
    case NamedState::T: return "T";
    case NamedState::D: return "D";
    case NamedState::B: return "B";
    case NamedState::gg: return "gg";
    case NamedState::ee: return "ee";
    case NamedState::rr: return "rr";
  }
  return "?";
}

const std::vector<NamedState>& named_state_catalogue() {
  static const std::vector<NamedState> all{NamedState::S,  NamedState::T,  NamedState::D, NamedState::B,
                                           NamedState::gg, NamedState::ee, NamedState::rr};
  return all;
}

NamedState parse_named_state(std::string_view name) {
  std::string listing;
  for (NamedState s : named_state_catalogue()) {
    if (to_string(s) == name) return s;
    listing += (listing.empty() ? "" : ", ") + std::string(to_string(s));
  }
  throw InvalidArgument("unknown state '" + std::string(name) + "'; known states: " + listing);
}

Ket named_state(NamedState s, const SpaceLayout& layout, bool with_cavity_vacuum) {
  Ket atoms = atomic_state(s);
  if (!with_cavity_vacuum) return atoms;
  require_full_layout(layout, "named_state");
  Ket vac(layout.dim(slot::cavity));
  vac[0] = 1.0;
  return tensor_product(atoms, vac);
}

Ket named_state(std::string_view name, const SpaceLayout& layout, bool with_cavity_vacuum) {
  return named_state(parse_named_state(name), layout, with_cavity_vacuum);
}

std::vector<Ket> ground_manifold(const SpaceLayout& layout) {
  using level::e, level::g;
  const bool cavity = layout.size() == 3;
  if (cavity) require_full_layout(layout, "ground_manifold");
  std::vector<Ket> out;
  for (std::size_t a : {g, e})
    for (std::size_t b : {g, e}) {
      Ket k(layout.total_dim());
      k[cavity ? layout.flat_index({a, b, 0}) : a * level::count + b] = 1.0;
      out.push_back(std::move(k));
    }
  return out;
}

Operator named_density(NamedState s, const SpaceLayout& layout) {
  return Operator::projector(named_state(s, layout, layout.size() == 3));
}

}  // namespace zd
