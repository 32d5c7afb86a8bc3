#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_util.hpp"
#include "zd/dynamics.hpp"
#include "zd/linalg.hpp"
#include "zd/steadystate.hpp"

using namespace zd;
using zd::testing::Rng;

namespace {

SystemParams fig2(double omega_a, double omega_b, double delta) {
  SystemParams p;
  p.omega_a = omega_a;
  p.omega_mw = omega_a / 2;
  p.omega_b = omega_b;
  p.delta = delta;
  p.gamma = 0.1;
  return p;
}

SystemParams small_full() {
  SystemParams p;
  p.omega_a = 0.05;
  p.omega_mw = 0.025;
  p.omega_b = 1.0;
  p.delta = 20.0;
  p.gamma = 0.3;
  p.kappa = 0.3;
  p.gamma_r = 0.001;
  p.fock_cutoff = 1;
  return p;
}

void check_density(const SteadyResult& r) {
  CHECK(r.rho_ss.is_hermitian(1e-9));
  CHECK(std::abs(r.rho_ss.trace() - 1.0) <= 1e-10);
  CHECK(hermitian_eigenvalues(r.rho_ss).front() >= -1e-7);
  CHECK(r.residual <= 1e-8 * std::max(1.0, r.generator_norm));
}

}  // namespace

TEST_CASE("liouvillian_matrix") {
  CHECK(liouvillian_matrix(Operator(3), {}).max_abs() == 0.0);

  Rng rng(41);
  const Operator h = rng.hermitian(4);
  const std::vector<Operator> c{rng.matrix(4), rng.matrix(4)};
  const Operator lv = liouvillian_matrix(h, c);
  for (int k = 0; k < 20; ++k) {
    const Operator rho = rng.matrix(4);  // the identity holds for any matrix
    CHECK(max_abs_diff(unvectorize(lv.apply(vectorize(rho))), lindblad_apply(h, c, rho)) <= 1e-12);
  }
  // vec(I)^dag L = 0
  const Ket id = vectorize(Operator::identity(4));
  for (std::size_t col = 0; col < 16; ++col) {
    cplx s = 0.0;
    for (std::size_t row = 0; row < 16; ++row) s += std::conj(id[row]) * lv(row, col);
    CHECK(std::abs(s) <= 1e-10);
  }
  for (std::size_t d : {7u, 16u}) {
    const Operator hh = rng.hermitian(d);
    const std::vector<Operator> cc{rng.matrix(d)};
    const Operator rho = rng.density(d);
    CHECK(max_abs_diff(unvectorize(liouvillian_matrix(hh, cc).apply(vectorize(rho))), lindblad_apply(hh, cc, rho)) <= 1e-12);
  }
  CHECK_THROWS_AS(liouvillian_matrix(Operator(2), {Operator(3)}), InvalidArgument);
}

TEST_CASE("hermitian basis") {
  Rng rng(42);
  const HermitianBasis basis(5);
  CHECK(basis.size() == 25);
  const Operator m = rng.hermitian(5);
  CHECK(max_abs_diff(basis.compose(basis.coordinates(m)), m) < 1e-14);
  const auto first = basis.coordinates(Operator::identity(5));
  CHECK(first[0] == doctest::Approx(std::sqrt(5.0)));
  for (std::size_t a = 1; a < first.size(); ++a) CHECK(std::abs(first[a]) < 1e-15);

  // orthonormal: <B_a, B_b> = Tr(B_a B_b) = delta_ab
  std::vector<Operator> elems;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    std::vector<double> x(basis.size(), 0.0);
    x[a] = 1.0;
    elems.push_back(basis.compose(x));
  }
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b)
      CHECK(std::abs((elems[a] * elems[b]).trace() - (a == b ? 1.0 : 0.0)) < 1e-14);

  const Operator h = rng.hermitian(5);
  const std::vector<Operator> c{rng.matrix(5)};
  const RealMatrix gen = real_liouvillian(h, c);
  for (std::size_t b = 0; b < gen.cols; ++b) CHECK(std::abs(gen(0, b)) < 1e-13);
  const Operator rho = rng.density(5);
  const auto x = basis.coordinates(rho);
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < gen.rows; ++i)
    for (std::size_t j = 0; j < gen.cols; ++j) y[i] += gen(i, j) * x[j];
  CHECK(max_abs_diff(basis.compose(y), lindblad_apply(h, c, rho)) < 1e-12);
}

TEST_CASE("steady-state methods agree on a random channel") {
  Rng rng(43);
  const std::size_t d = 6;
  const Operator h = rng.hermitian(d);
  const std::vector<Operator> c{rng.matrix(d) * cplx(0.5), rng.matrix(d) * cplx(0.5)};
  std::vector<SteadyResult> results;
  for (SteadyMethod m : {SteadyMethod::Qr, SteadyMethod::Svd, SteadyMethod::TraceReplacement}) {
    SteadyOptions opts;
    opts.method = m;
    results.push_back(steady_state(h, c, opts));
    check_density(results.back());
    CHECK(results.back().unique);
    CHECK(lindblad_apply(h, c, results.back().rho_ss).max_abs() < 1e-10);
  }
  CHECK(max_abs_diff(results[0].rho_ss, results[1].rho_ss) < 1e-10);
  CHECK(max_abs_diff(results[0].rho_ss, results[2].rho_ss) < 1e-10);
  CHECK(results[0].sigma_second > 1e3 * results[0].sigma_min);
  CHECK(results[1].sigma_second > 1e3 * results[1].sigma_min);
  CHECK(std::isnan(results[2].sigma_second));
}

TEST_CASE("amplitude damping steady state and gap") {
  const double gamma = 0.4;
  const std::vector<Operator> c{Operator::unit(2, 0, 1) * cplx(std::sqrt(gamma))};
  SteadyOptions opts;
  opts.compute_gap = true;
  const SteadyResult r = steady_state(Operator(2), c, opts);
  CHECK(max_abs_diff(r.rho_ss, Operator::unit(2, 0, 0)) < 1e-12);
  CHECK(r.unique);
  REQUIRE(r.gap.has_value());
  CHECK(*r.gap == doctest::Approx(gamma / 2).epsilon(1e-10));
  CHECK(spectral_gap(Operator(2), c) == doctest::Approx(gamma / 2).epsilon(1e-10));
}

TEST_CASE("degenerate steady space is flagged") {
  // Two independent decaying qubits in a direct sum: two stationary states.
  Operator l1(4), l2(4);
  l1(0, 1) = 1.0;
  l2(2, 3) = 1.0;
  for (SteadyMethod m : {SteadyMethod::Qr, SteadyMethod::Svd}) {
    SteadyOptions opts;
    opts.method = m;
    opts.compute_gap = true;
    const SteadyResult r = steady_state(Operator(4), {l1, l2}, opts);
    CHECK_FALSE(r.unique);
    REQUIRE(r.gap.has_value());
    CHECK(*r.gap == 0.0);
    check_density(r);
  }
  // The trace-replaced system is singular here.
  SteadyOptions tr;
  tr.method = SteadyMethod::TraceReplacement;
  CHECK_THROWS_AS(steady_state(Operator(4), {l1, l2}, tr), SolverError);
  CHECK_THROWS_AS(steady_state(Operator(3), {}), InvalidArgument);
}

TEST_CASE("effective model: dark singlet is the unique steady state") {
  for (const SystemParams& p : {fig2(0.1, 0.5, 10), fig2(0.05, 0.5, 20), fig2(0.05, 5, 100), fig2(0.05, 10, 200)}) {
    const OpenSystem sys = effective_system(p);
    const InvariantSubspace sub = invariant_subspace(sys.hamiltonian, sys.collapse, ground_manifold(sys.layout));
    CHECK(sub.dim() == 7);
    for (SteadyMethod m : {SteadyMethod::Qr, SteadyMethod::Svd}) {
      SteadyOptions opts;
      opts.method = m;
      const SteadyResult r = steady_state_in_subspace(sys.hamiltonian, sys.collapse, ground_manifold(sys.layout), opts);
      CHECK(r.unique);
      CHECK(r.rho_ss.dim() == 16);
      CHECK(fidelity_singlet(r.rho_ss, sys.layout) >= 1.0 - 1e-8);
      check_density(r);
    }
    // The literal 16-dimensional equation also keeps the decoupled levels,
    // so its steady space is degenerate.
    CHECK_FALSE(steady_state(sys).unique);
  }
}

TEST_CASE("invariant subspace restriction") {
  Rng rng(44);
  const std::size_t d = 5;
  // block diagonal H and L on {0,1,2} + {3,4}
  Operator h(d), l(d);
  const Operator hb = rng.hermitian(3), lb = rng.matrix(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      h(i, j) = hb(i, j);
      l(i, j) = lb(i, j);
    }
  h(3, 4) = h(4, 3) = 1.0;
  Ket seed(d, 0.0);
  seed[0] = 1.0;
  const InvariantSubspace sub = invariant_subspace(h, {l}, {seed});
  CHECK(sub.dim() == 3);
  const Operator rho = rng.density(3);
  CHECK(max_abs_diff(sub.restrict(sub.lift(rho)), rho) < 1e-13);
}

TEST_CASE("restricted effective generator has a positive gap") {
  auto restricted_gap = [](const OpenSystem& sys) {
    const InvariantSubspace sub = invariant_subspace(sys.hamiltonian, sys.collapse, ground_manifold(sys.layout));
    std::vector<Operator> c;
    for (const auto& l : sys.collapse) c.push_back(sub.restrict(l));
    return spectral_gap(sub.restrict(sys.hamiltonian), c);
  };
  // slowest relaxation from the {T, D} Zeno block
  CHECK(restricted_gap(effective_system(fig2(0.1, 0.5, 10))) == doctest::Approx(0.00207).epsilon(0.01));
  CHECK(restricted_gap(effective_system(fig2(0.05, 0.5, 20))) == doctest::Approx(0.00142).epsilon(0.01));
  // large antiblockade shift: the ee/rr coherence relaxes slowly but still relaxes
  CHECK(restricted_gap(effective_system(fig2(0.05, 5, 100))) > 1e-7);
}

TEST_CASE("full model steady state") {
  const SystemParams p = small_full();
  const OpenSystem sys = full_system(p);
  const SteadyResult qr = steady_state(sys);
  check_density(qr);
  CHECK(qr.unique);
  SteadyOptions tr;
  tr.method = SteadyMethod::TraceReplacement;
  CHECK(max_abs_diff(steady_state(sys, tr).rho_ss, qr.rho_ss) < 1e-9);

  SystemParams q = p;
  q.eta = 0.0;
  CHECK(max_abs_diff(steady_state_feedback(q).rho_ss, qr.rho_ss) < 1e-9);
  q.eta = 0.5 * std::numbers::pi;
  const SteadyResult fb = steady_state_feedback(q);
  check_density(fb);
  q.kappa = 0.0;
  CHECK_THROWS_AS(steady_state_feedback(q), InvalidArgument);

  // fixed point: evolving rho_ss for 100/g leaves the fidelity unchanged
  const std::vector<double> times{0.0, 100.0};
  const Trajectory traj = evolve(sys.hamiltonian, sys.collapse, qr.rho_ss, sys.layout, times);
  CHECK(std::abs(traj.rows.back().fidelity_S - fidelity_singlet(qr.rho_ss, sys.layout)) < 1e-6);
}

TEST_CASE("propagator and matrix exponential") {
  Rng rng(45);
  const std::size_t d = 3;
  const Operator h = rng.hermitian(d);
  const std::vector<Operator> c{rng.matrix(d) * cplx(0.4)};
  const RealMatrix gen = real_liouvillian(h, c);
  const RealMatrix prop = liouvillian_propagator(gen, 0.7);
  const HermitianBasis basis(d);
  const Operator rho = rng.density(d);
  const auto x = basis.coordinates(rho);
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < prop.rows; ++i)
    for (std::size_t j = 0; j < prop.cols; ++j) y[i] += prop(i, j) * x[j];
  const Operator lv = liouvillian_matrix(h, c);
  const Operator oracle = unvectorize(zd::testing::taylor_expm(lv * cplx(0.7)).apply(vectorize(rho)));
  CHECK(max_abs_diff(basis.compose(y), oracle) < 1e-12);

  RealMatrix zero(4, 4);
  const RealMatrix e = expm(zero);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(e(i, j) == (i == j ? 1.0 : 0.0));
}
