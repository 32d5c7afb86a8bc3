#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_util.hpp"
#include "zd/linalg.hpp"
#include "zd/model.hpp"

using namespace zd;

namespace {

SystemParams fig2a() {
  SystemParams p;
  p.omega_a = 0.1;
  p.omega_mw = 0.05;
  p.omega_b = 0.5;
  p.delta = 10.0;
  p.gamma = 0.1;
  return p;
}

SystemParams fig4() {
  SystemParams p;
  p.omega_a = 0.01;
  p.omega_mw = 0.005;
  p.omega_b = 1.0;
  p.delta = 20.0;
  p.gamma_r = 0.001;
  p.gamma = 0.2;
  p.kappa = 0.5;
  return p;
}

Ket with_vacuum(const Ket& atoms, std::size_t photons, const SpaceLayout& layout) {
  Ket fock(layout.dim(slot::cavity), 0.0);
  fock[photons] = 1.0;
  return tensor_product(atoms, fock);
}

Ket two_atom(std::size_t a, std::size_t b) {
  Ket v(16, 0.0);
  v[a * 4 + b] = 1.0;
  return v;
}

Ket combine(const Ket& x, cplx cx, const Ket& y, cplx cy) {
  Ket out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = cx * x[i] + cy * y[i];
  return out;
}

}  // namespace

TEST_CASE("derived parameters") {
  SystemParams p;
  p.omega_b = 0.5;
  p.delta = 10.0;
  CHECK(derived_params(p).lambda == doctest::Approx(0.05).epsilon(1e-15));

  p.omega_b = 1.0;
  p.delta = 20.0;
  const DerivedParams d = derived_params(p);
  CHECK(d.lambda == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(d.u_rr == doctest::Approx(39.9).epsilon(1e-15));

  p.gamma = p.kappa = 0.1;
  CHECK(*derived_params(p).cooperativity == doctest::Approx(100.0).epsilon(1e-12));
  p.kappa = 0.0;
  CHECK_FALSE(derived_params(p).cooperativity.has_value());

  p.omega_a = 0.05;
  CHECK(*derived_params(p).zeno_ratio == doctest::Approx(20.0));

  SystemParams bad;
  bad.omega_b = 1.0;
  bad.delta = 0.0;
  CHECK_THROWS_AS(derived_params(bad), InvalidArgument);
  bad = SystemParams{};
  bad.omega_b = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("named states") {
  const SpaceLayout atoms = SpaceLayout::atoms_only();
  for (NamedState s : named_state_catalogue()) CHECK(norm(named_state(s, atoms, false)) == doctest::Approx(1.0).epsilon(1e-12));
  const Ket s = named_state(NamedState::S, atoms, false);
  const Ket t = named_state(NamedState::T, atoms, false);
  CHECK(std::abs(inner(s, t)) < 1e-15);

  const Ket sv = named_state(NamedState::S, SpaceLayout::atoms_and_cavity(2), true);
  CHECK(sv.size() == 48);
  std::size_t nonzero = 0;
  for (const auto& x : sv) {
    if (x != cplx(0.0)) {
      ++nonzero;
      CHECK(std::abs(std::abs(x) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
  }
  CHECK(nonzero == 2);

  // Swapping atom labels: S is antisymmetric, T symmetric.
  Operator swap(16);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) swap(b * 4 + a, a * 4 + b) = 1.0;
  CHECK(zd::testing::max_abs(swap.apply(s), combine(s, -1.0, s, 0.0)) < 1e-15);
  CHECK(zd::testing::max_abs(swap.apply(t), t) < 1e-15);

  CHECK(parse_named_state("T") == NamedState::T);
  CHECK_THROWS_WITH_AS(parse_named_state("xx"), doctest::Contains("gg"), InvalidArgument);
}

TEST_CASE("full Hamiltonian") {
  SUBCASE("hermitian for every scenario-like parameter set") {
    for (const SystemParams& p : {fig2a(), fig4()}) CHECK(build_full_hamiltonian(p).is_hermitian(1e-12));
  }
  SUBCASE("antiblockade entry") {
    SystemParams p;
    p.omega_b = 0.5;
    p.delta = 10.0;
    const SpaceLayout layout = SpaceLayout::atoms_and_cavity(1);
    const Operator h = build_full_hamiltonian(p, layout);
    const double lambda = derived_params(p).lambda;
    for (std::size_t n = 0; n < 2; ++n) {
      const std::size_t rr = layout.flat_index({level::r, level::r, n});
      CHECK(h(rr, rr) == cplx(-lambda));
    }
    // nothing else on the diagonal besides the single-excitation frame shift
    const std::size_t rg = layout.flat_index({level::r, level::g, 0});
    CHECK(h(rg, rg) == cplx(-p.delta));

    SystemParams flat;  // no drives, no detuning, no cavity coupling
    flat.g = 0.0;
    CHECK(build_full_hamiltonian(flat, layout).max_abs() == 0.0);
  }
  SUBCASE("Zeno couplings") {
    const SystemParams p = fig2a();
    const SpaceLayout layout = SpaceLayout::atoms_and_cavity(2);
    const Operator h = build_full_hamiltonian(p, layout);
    const SpaceLayout atoms = SpaceLayout::atoms_only();
    const Ket t0 = named_state(NamedState::T, layout, true);
    const Ket d0 = named_state(NamedState::D, layout, true);
    const Ket s0 = named_state(NamedState::S, layout, true);
    const Ket pg = two_atom(level::p, level::g), gp = two_atom(level::g, level::p);
    const Ket dplus = with_vacuum(combine(pg, 1.0 / std::sqrt(2.0), gp, 1.0 / std::sqrt(2.0)), 0, layout);
    const Ket gg1 = with_vacuum(two_atom(level::g, level::g), 1, layout);

    CHECK(std::abs(inner(t0, h.apply(d0)) - 0.1) < 1e-15);
    CHECK(std::abs(inner(s0, h.apply(dplus)) - 0.1) < 1e-15);
    CHECK(std::abs(inner(gg1, h.apply(d0))) < 1e-15);
    CHECK(std::abs(inner(gg1, h.apply(dplus)) - std::sqrt(2.0) * p.g) < 1e-14);
    (void)atoms;
  }
  SUBCASE("Zeno block on {T, D}") {
    SystemParams p = fig2a();
    p.g = 0.0;  // delete the cavity term
    const SpaceLayout layout = SpaceLayout::atoms_and_cavity(1);
    const Operator h = build_full_hamiltonian(p, layout);
    const Ket t0 = named_state(NamedState::T, layout, true);
    const Ket d0 = named_state(NamedState::D, layout, true);
    // T has one atom in |e> and carries the compensating light shift
    CHECK(std::abs(inner(t0, h.apply(t0)) + p.omega_b * p.omega_b / p.delta) < 1e-15);
    CHECK(std::abs(inner(d0, h.apply(d0))) < 1e-15);
    CHECK(std::abs(inner(t0, h.apply(d0)) - p.omega_a) < 1e-15);
    CHECK(std::abs(inner(d0, h.apply(t0)) - p.omega_a) < 1e-15);
  }
}

TEST_CASE("full collapse operators") {
  const SpaceLayout layout = SpaceLayout::atoms_and_cavity(2);
  SystemParams p;
  CHECK(build_full_collapse_ops(p, layout).empty());

  p.gamma = 0.1;
  const auto four = build_full_collapse_ops(p, layout);
  REQUIRE(four.size() == 4);
  for (const auto& l : four) CHECK(l.max_abs() == doctest::Approx(std::sqrt(0.05)).epsilon(1e-15));

  const SystemParams q = fig4();
  const auto nine = build_full_collapse_ops(q, layout);
  REQUIRE(nine.size() == 9);
  // order per atom: p->g, p->e, r->g, r->e; then the cavity
  Operator rydberg(layout.total_dim());
  for (std::size_t idx : {2u, 3u, 6u, 7u}) rydberg += nine[idx].adjoint() * nine[idx];
  const Operator expected = (embed(Operator::unit(4, level::r, level::r), slot::atom1, layout) +
                             embed(Operator::unit(4, level::r, level::r), slot::atom2, layout)) *
                            cplx(q.gamma_r);
  CHECK(max_abs_diff(rydberg, expected) < 1e-15);
}

TEST_CASE("effective model") {
  const SystemParams p = fig2a();
  const EffectiveModel m = build_effective_model(p);
  const SpaceLayout atoms = SpaceLayout::atoms_only();
  const Ket s = named_state(NamedState::S, atoms, false);

  CHECK(norm(m.hamiltonian.apply(s)) <= 1e-14);
  REQUIRE(m.collapse.size() == 3);
  for (const auto& l : m.collapse) CHECK(norm(l.apply(s)) <= 1e-14);

  const Ket t = named_state(NamedState::T, atoms, false);
  const Ket d = named_state(NamedState::D, atoms, false);
  const Ket ee = named_state(NamedState::ee, atoms, false);
  const Ket rr = named_state(NamedState::rr, atoms, false);
  CHECK(std::abs(inner(t, m.hamiltonian.apply(d)) - p.omega_a) < 1e-15);
  CHECK(std::abs(std::conj(inner(ee, m.hamiltonian.apply(rr))) - derived_params(p).lambda) < 1e-15);
  CHECK(m.hamiltonian.is_hermitian(1e-14));

  Operator sum(16);
  for (const auto& l : m.collapse) sum += l.adjoint() * l;
  CHECK(max_abs_diff(sum, Operator::projector(d) * cplx(p.gamma)) < 1e-15);
}

TEST_CASE("feedback jump") {
  const SpaceLayout layout = SpaceLayout::atoms_and_cavity(2);
  SystemParams p = fig4();
  p.eta = 0.0;
  const Operator plain = std::sqrt(p.kappa) * embed(annihilation(2), slot::cavity, layout);
  CHECK(max_abs_diff(build_feedback_jump(p, layout), plain) == 0.0);

  p.eta = 0.5 * std::numbers::pi;
  const Operator u = feedback_unitary(p.eta, layout);
  CHECK(u.is_unitary(1e-10));
  // atom-1 block: -i(|g><e| + |e><g|), identity on p and r; atom 2 in g, vacuum
  const std::size_t g0 = 0 * 12, e0 = 1 * 12, p0 = 2 * 12, r0 = 3 * 12;
  CHECK(std::abs(u(g0, e0) - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(u(e0, g0) - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(u(g0, g0)) < 1e-15);
  CHECK(std::abs(u(p0, p0) - 1.0) < 1e-15);
  CHECK(std::abs(u(r0, r0) - 1.0) < 1e-15);

  for (double eta : {0.3, 0.5 * std::numbers::pi, 2.0}) {
    p.eta = eta;
    const Operator j = build_feedback_jump(p, layout);
    CHECK(max_abs_diff(j.adjoint() * j, plain.adjoint() * plain) < 1e-12);
  }
  p.kappa = 0.0;
  CHECK_THROWS_AS(build_feedback_jump(p, layout), InvalidArgument);
}
