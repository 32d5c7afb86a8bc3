#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zd/layout.hpp"
#include "zd/operator.hpp"

namespace zd {

/// Physical parameters of the two-atom cavity system.
///
/// Every rate is expressed in one common unit; scenarios use g as that unit
/// (g = 1), so times come out in units of 1/g.
struct SystemParams {
  double g = 1.0;               // atom-cavity coupling on |g> <-> |p>
  double omega_a = 0.0;         // pump Rabi frequency on |e> <-> |p>, sign alternates between atoms
  double omega_mw = 0.0;        // microwave Rabi frequency on |g> <-> |e>
  double omega_b = 0.0;         // Rydberg pump Rabi frequency on |e> <-> |r>
  double delta = 0.0;           // Rydberg pump detuning
  double u_rr_deviation = 0.0;  // offset of U_rr from the antiblockade point 2*delta - lambda
  double gamma = 0.0;           // decay rate of |p>, split equally into |g> and |e>
  double gamma_r = 0.0;         // decay rate of |r>, split equally into |g> and |e>
  double kappa = 0.0;           // cavity field decay rate
  double eta = 0.0;             // feedback rotation angle (radians)
  unsigned fock_cutoff = 2;     // highest photon number kept

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

struct DerivedParams {
  double lambda = 0.0;              // 2 omega_b^2 / delta
  std::optional<double> zeno_ratio;  // g / omega_a
  std::optional<double> cooperativity;  // g^2 / (kappa gamma)
  double u_rr = 0.0;                // 2 delta - lambda + u_rr_deviation
};

DerivedParams derived_params(const SystemParams& p);

/// Truncated annihilation operator on levels 0..cutoff.
Operator annihilation(std::size_t cutoff);

/// Full atom-atom-cavity Hamiltonian in the frame rotating at the Rydberg pump
/// detuning. Each |r> sits at -delta, |rr> at U_rr - 2 delta, and each |e> at
/// -omega_b^2 / delta so that the microwave stays resonant with the
/// light-shifted |g> <-> |e> line. Layout must be [4, 4, n]; the Fock cutoff
/// is taken from it.
Operator build_full_hamiltonian(const SystemParams& p, const SpaceLayout& layout);
Operator build_full_hamiltonian(const SystemParams& p);

/// Spontaneous emission of |p> and |r> on both atoms plus cavity decay.
/// Channels with zero rate are left out. Order: atom 1 (p->g, p->e, r->g,
/// r->e), atom 2 (same), cavity.
std::vector<Operator> build_full_collapse_ops(const SystemParams& p, const SpaceLayout& layout);
std::vector<Operator> build_full_collapse_ops(const SystemParams& p);

/// Cavity-free model on the 16-dimensional two-atom space.
struct EffectiveModel {
  Operator hamiltonian;
  std::vector<Operator> collapse;
};

EffectiveModel build_effective_model(const SystemParams& p);

/// sqrt(kappa) * U_fb * a, where U_fb rotates atom 1 by
/// exp(-i eta (|e><g| + |g><e|)). Requires kappa > 0.
Operator build_feedback_jump(const SystemParams& p, const SpaceLayout& layout);

/// The feedback rotation U_fb on the full space.
Operator feedback_unitary(double eta, const SpaceLayout& layout);

/// Full-model collapse operators with the cavity channel routed through the
/// feedback rotation. Requires kappa > 0.
std::vector<Operator> build_feedback_collapse_ops(const SystemParams& p, const SpaceLayout& layout);

/// Hamiltonian, collapse operators and layout of one master equation.
struct OpenSystem {
  SpaceLayout layout;
  Operator hamiltonian;
  std::vector<Operator> collapse;
};

/// Full atom-atom-cavity model at p.fock_cutoff, optionally with feedback.
OpenSystem full_system(const SystemParams& p, bool feedback = false);
/// Cavity-free effective model on the [4, 4] layout.
OpenSystem effective_system(const SystemParams& p);

enum class NamedState { S, T, D, B, gg, ee, rr };

std::string_view to_string(NamedState s);
/// Throws InvalidArgument listing the catalogue for unknown names.
NamedState parse_named_state(std::string_view name);
const std::vector<NamedState>& named_state_catalogue();

/// Two-atom state, optionally tensored with the cavity vacuum. Without the
/// vacuum the result is 16-dimensional whatever the layout; with it, the
/// layout must carry a cavity slot.
Ket named_state(NamedState s, const SpaceLayout& layout, bool with_cavity_vacuum);
Ket named_state(std::string_view name, const SpaceLayout& layout, bool with_cavity_vacuum);

/// |gg>, |ge>, |eg>, |ee> (with the cavity vacuum when the layout has a
/// cavity slot): the two-atom ground manifold.
std::vector<Ket> ground_manifold(const SpaceLayout& layout);

/// |psi><psi| for the named state on the given layout (vacuum included when the
/// layout has a cavity slot).
Operator named_density(NamedState s, const SpaceLayout& layout);

}  // namespace zd
