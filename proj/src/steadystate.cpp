#include "zd/steadystate.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eigen_bridge.hpp"
#include "zd/dynamics.hpp"
#include "zd/linalg.hpp"

namespace zd {
namespace {

using detail::RMatrix;
using detail::RVector;

Eigen::Map<const RMatrix> view(const RealMatrix& m) {
  return {m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols)};
}

void require_shared_dim(const Operator& h, const std::vector<Operator>& collapse, const char* who) {
  if (h.dim() == 0) throw InvalidArgument(std::string(who) + ": empty Hamiltonian");
  for (std::size_t j = 0; j < collapse.size(); ++j) {
    if (collapse[j].dim() != h.dim()) {
      throw InvalidArgument(std::string(who) + ": collapse operator " + std::to_string(j) + " has dimension " +
                            std::to_string(collapse[j].dim()) + ", expected " + std::to_string(h.dim()));
    }
  }
}

struct Nonzero {
  std::size_t row;
  std::size_t col;
  cplx value;
};

std::vector<Nonzero> nonzeros(const Operator& m) {
  std::vector<Nonzero> out;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m(i, j) != cplx(0.0)) out.push_back({i, j, m(i, j)});
  return out;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::vector<double> matvec(const RealMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows);
  simd::active_kernels().dgemv(a.data, x, y);
  return y;
}

Operator hermitized(const Operator& m) {
  Operator out = m;
  out += m.adjoint();
  out *= 0.5;
  return out;
}

/// Upper bound on the smallest singular value of an upper-triangular R, by
/// inverse iteration on R^T R.
template <class Tri>
double triangular_sigma_min(const Tri& r) {
  const Eigen::Index m = r.rows();
  if (m == 0) return std::numeric_limits<double>::infinity();
  if ((r.diagonal().array() == 0.0).any()) return 0.0;
  const auto upper = r.template triangularView<Eigen::Upper>();
  RVector x = RVector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
  double estimate = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 100; ++iter) {
    RVector w = upper.transpose().solve(x);
    const double wn = w.norm();
    if (!std::isfinite(wn) || wn == 0.0) return 0.0;
    const double next = 1.0 / wn;
    upper.solveInPlace(w);
    const double zn = w.norm();
    if (!std::isfinite(zn) || zn == 0.0) return 0.0;
    x = w / zn;
    const bool settled = std::abs(estimate - next) <= 1e-6 * next;
    estimate = next;
    if (settled) break;
  }
  return estimate;
}

SteadyResult finish_real(const RealMatrix& gen, const HermitianBasis& basis, std::span<const double> null_vec,
                         double sigma_second, const SteadyOptions& opts) {
  SteadyResult res;
  res.generator_norm = gen.frobenius_norm();
  const double scale = std::max(1.0, res.generator_norm);
  const double vnorm = norm2(null_vec);
  res.sigma_min = norm2(matvec(gen, null_vec)) / vnorm;
  res.sigma_second = sigma_second;
  if (res.sigma_min > opts.null_tol * scale) {
    throw SolverError("steady state: no numerical null space (smallest singular value " +
                      std::to_string(res.sigma_min) + ")");
  }
  const double tr = null_vec[0] * std::sqrt(static_cast<double>(basis.dim()));
  if (std::abs(tr) <= 1e-12 * vnorm) throw SolverError("steady state: null vector is traceless");
  std::vector<double> x(null_vec.begin(), null_vec.end());
  for (double& v : x) v /= tr;
  res.rho_ss = basis.compose(x);
  res.residual = norm2(matvec(gen, x));
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  res.unique = sigma_second > opts.uniqueness_ratio * std::max(res.sigma_min, floor);
  return res;
}

SteadyResult solve_qr(const RealMatrix& gen, const HermitianBasis& basis, const SteadyOptions& opts) {
  const auto n = static_cast<Eigen::Index>(gen.rows);
  if (n == 1) return finish_real(gen, basis, std::vector<double>{1.0}, std::numeric_limits<double>::infinity(), opts);

  // Row 0 of a trace-preserving generator vanishes; ker(B) of the remaining
  // rows B is the steady space.
  const double threshold = opts.null_tol * std::max(1.0, gen.frobenius_norm());
  {
    // Fast path: blocked QR without pivoting. When B has full row rank the
    // last column of Q spans ker(B) and sigma_min(R) is sigma_2 of L.
    using CMajor = Eigen::MatrixXd;
    const Eigen::HouseholderQR<CMajor> qr(CMajor(view(gen).bottomRows(n - 1).transpose()));
    const auto& packed = qr.matrixQR();
    const double sigma2 = triangular_sigma_min(packed.topLeftCorner(n - 1, n - 1));
    RVector e = RVector::Zero(n);
    e[n - 1] = 1.0;
    e.applyOnTheLeft(qr.householderQ());
    std::vector<double> v(e.data(), e.data() + n);
    const double sigma1 = norm2(matvec(gen, v));
    if (sigma2 > threshold && sigma2 > opts.uniqueness_ratio * sigma1) return finish_real(gen, basis, std::move(v), sigma2, opts);
  }

  // Factor B^T P = Q [R; 0] with column pivoting,
  // so |R_ii| is non-increasing and the columns of Q past the numerical rank
  // span ker(B).
  const Eigen::ColPivHouseholderQR<RMatrix> qr(view(gen).bottomRows(n - 1).transpose());
  const auto& packed = qr.matrixQR();
  Eigen::Index rank = 0;
  while (rank < n - 1 && std::abs(packed(rank, rank)) > threshold) ++rank;
  const Eigen::Index nullity = n - rank;
  RMatrix kernel = RMatrix::Zero(n, nullity);
  for (Eigen::Index k = 0; k < nullity; ++k) kernel(rank + k, k) = 1.0;
  kernel.applyOnTheLeft(qr.householderQ());

  auto column = [&](Eigen::Index k) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = kernel(i, k);
    return v;
  };
  if (nullity == 1) {
    const double sigma2 = triangular_sigma_min(packed.topLeftCorner(n - 1, n - 1));
    return finish_real(gen, basis, column(0), sigma2, opts);
  }
  // Degenerate: return the kernel element nearest the trace direction,
  // N N^T e_0, and report the second kernel vector's residual as sigma_2.
  const RVector nearest = kernel * kernel.row(0).transpose();
  if (nearest.norm() == 0.0) throw SolverError("steady state: kernel is orthogonal to the trace direction");
  const std::vector<double> second = column(1);
  const double sigma2 = norm2(matvec(gen, second));
  SteadyResult res = finish_real(gen, basis, std::vector<double>(nearest.data(), nearest.data() + n), sigma2, opts);
  res.unique = false;
  return res;
}

SteadyResult solve_trace_replacement(const RealMatrix& gen, const HermitianBasis& basis, const SteadyOptions& opts) {
  const auto n = static_cast<Eigen::Index>(gen.rows);
  RMatrix a = view(gen);
  a.row(0).setZero();
  a(0, 0) = std::sqrt(static_cast<double>(basis.dim()));
  RVector rhs = RVector::Zero(n);
  rhs[0] = 1.0;
  const Eigen::PartialPivLU<RMatrix> lu(a);
  // rcond() is unreliable once a pivot is exactly zero, so look at the pivots too.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || !(pivots.minCoeff() > opts.null_tol * pivots.maxCoeff())) {
    throw SolverError("steady state: trace-replaced system is singular");
  }
  const RVector sol = lu.solve(rhs);
  const std::vector<double> x(sol.data(), sol.data() + n);

  SteadyResult res;
  res.generator_norm = gen.frobenius_norm();
  res.rho_ss = basis.compose(x);
  res.residual = norm2(matvec(gen, x));
  res.sigma_min = res.residual / norm2(x);
  // No singular values on this path; the condition estimate decides uniqueness.
  res.sigma_second = std::numeric_limits<double>::quiet_NaN();
  res.unique = rcond > static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  if (res.residual > opts.null_tol * std::max(1.0, res.generator_norm)) {
    throw SolverError("steady state: trace-replaced solve left residual " + std::to_string(res.residual));
  }
  return res;
}

SteadyResult solve_svd(const Operator& h, const std::vector<Operator>& collapse, const SteadyOptions& opts) {
  const Operator lv = liouvillian_matrix(h, collapse);
  const NullSpace ns = nullspace_analysis(lv, opts.null_tol);
  if (ns.basis.empty()) throw SolverError("steady state: no numerical null space");
  const auto& s = ns.singular_values;

  Operator rho = unvectorize(ns.basis.front());
  const cplx tr = rho.trace();
  if (std::abs(tr) <= 1e-12) throw SolverError("steady state: null vector is traceless");
  rho *= 1.0 / tr;

  SteadyResult res;
  res.rho_ss = hermitized(rho);
  res.generator_norm = lv.frobenius_norm();
  const Ket r = lv.apply(vectorize(res.rho_ss));
  res.residual = norm(r);
  res.sigma_min = s.back();
  res.sigma_second = s.size() > 1 ? s[s.size() - 2] : std::numeric_limits<double>::infinity();
  const double floor = std::numeric_limits<double>::epsilon() * std::max(1.0, res.generator_norm);
  res.unique = res.sigma_second > opts.uniqueness_ratio * std::max(res.sigma_min, floor);
  return res;
}

}  // namespace

double RealMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

Ket vectorize(const Operator& rho) {
  const std::size_t d = rho.dim();
  Ket v(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) v[j * d + i] = rho(i, j);
  return v;
}

Operator unvectorize(std::span<const cplx> v) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw InvalidArgument("unvectorize: length " + std::to_string(v.size()) + " is not square");
  Operator rho(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) rho(i, j) = v[j * d + i];
  return rho;
}

Operator liouvillian_matrix(const Operator& h, const std::vector<Operator>& collapse) {
  require_shared_dim(h, collapse, "liouvillian_matrix");
  const std::size_t d = h.dim();
  const cplx i_unit(0.0, 1.0);

  // With H_nh = H - i/2 sum L^dag L, -i (I (x) H_nh) + i (H_nh^dag)^T (x) I covers
  // the coherent part and both anticommutator halves.
  Operator k(d);
  for (const auto& l : collapse) k += l.adjoint() * l;
  const Operator hnh = h - (0.5 * i_unit) * k;
  const Operator hnh_dag = hnh.adjoint();  // multiplies rho from the right

  Operator lv(d * d);
  auto at = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) -> cplx& {
    return lv(a * d + b, c * d + e);
  };
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t e = 0; e < d; ++e) {
        if (hnh(b, e) != cplx(0.0)) at(a, b, a, e) += -i_unit * hnh(b, e);
      }
      for (std::size_t c = 0; c < d; ++c) {
        if (hnh_dag(c, a) != cplx(0.0)) at(a, b, c, b) += i_unit * hnh_dag(c, a);
      }
    }
  }
  for (const auto& l : collapse) {
    const auto nz = nonzeros(l);
    for (const auto& x : nz)
      for (const auto& y : nz) at(x.row, y.row, x.col, y.col) += std::conj(x.value) * y.value;
  }
  return lv;
}

HermitianBasis::HermitianBasis(std::size_t d) : d_(d), helmert_(d > 0 ? (d - 1) * d : 0, 0.0) {
  if (d == 0) throw InvalidArgument("HermitianBasis: dimension must be positive");
  for (std::size_t k = 1; k < d; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 1.0 / std::sqrt(kk * (kk + 1.0));
    double* row = helmert_.data() + (k - 1) * d;
    for (std::size_t j = 0; j < k; ++j) row[j] = s;
    row[k] = -kk * s;
  }
}

std::vector<double> HermitianBasis::coordinates(const Operator& m) const {
  if (m.dim() != d_) throw InvalidArgument("HermitianBasis::coordinates: dimension mismatch");
  std::vector<double> x(size(), 0.0);
  double tr = 0.0;
  for (std::size_t j = 0; j < d_; ++j) tr += m(j, j).real();
  x[0] = tr / std::sqrt(static_cast<double>(d_));
  for (std::size_t k = 1; k < d_; ++k) {
    const double* row = helmert_.data() + (k - 1) * d_;
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += row[j] * m(j, j).real();
    x[k] = s;
  }
  const double r2 = std::sqrt(2.0);
  std::size_t idx = d_;
  for (std::size_t j = 0; j < d_; ++j) {
    for (std::size_t k = j + 1; k < d_; ++k) {
      x[idx++] = r2 * m(j, k).real();
      x[idx++] = r2 * m(j, k).imag();
    }
  }
  return x;
}

Operator HermitianBasis::compose(std::span<const double> x) const {
  if (x.size() != size()) throw InvalidArgument("HermitianBasis::compose: coordinate count mismatch");
  Operator m(d_);
  const double base = x[0] / std::sqrt(static_cast<double>(d_));
  for (std::size_t j = 0; j < d_; ++j) m(j, j) = base;
  for (std::size_t k = 1; k < d_; ++k) {
    if (x[k] == 0.0) continue;
    const double* row = helmert_.data() + (k - 1) * d_;
    for (std::size_t j = 0; j <= k; ++j) m(j, j) += x[k] * row[j];
  }
  const double r2 = 1.0 / std::sqrt(2.0);
  std::size_t idx = d_;
  for (std::size_t j = 0; j < d_; ++j) {
    for (std::size_t k = j + 1; k < d_; ++k) {
      const cplx v(r2 * x[idx], r2 * x[idx + 1]);
      idx += 2;
      m(j, k) = v;
      m(k, j) = std::conj(v);
    }
  }
  return m;
}

RealMatrix real_liouvillian(const Operator& h, const std::vector<Operator>& collapse) {
  require_shared_dim(h, collapse, "real_liouvillian");
  const std::size_t d = h.dim();
  const HermitianBasis basis(d);
  const LindbladRhs rhs(h, collapse);
  const std::size_t n = basis.size();
  RealMatrix gen(n, n);
  std::vector<double> unit(n, 0.0);
  Operator out(d);
  for (std::size_t b = 0; b < n; ++b) {
    unit[b] = 1.0;
    const Operator element = basis.compose(unit);
    unit[b] = 0.0;
    rhs.apply(element.data(), out.data());
    const std::vector<double> col = basis.coordinates(out);
    for (std::size_t a = 0; a < n; ++a) gen(a, b) = col[a];
  }
  return gen;
}

SteadyResult steady_state(const Operator& h, const std::vector<Operator>& collapse, const SteadyOptions& opts) {
  require_shared_dim(h, collapse, "steady_state");
  if (collapse.empty()) throw InvalidArgument("steady_state: at least one collapse operator is required");

  SteadyResult res;
  std::optional<RealMatrix> gen;
  if (opts.method == SteadyMethod::Svd) {
    res = solve_svd(h, collapse, opts);
  } else {
    gen = real_liouvillian(h, collapse);
    const HermitianBasis basis(h.dim());
    res = opts.method == SteadyMethod::Qr ? solve_qr(*gen, basis, opts) : solve_trace_replacement(*gen, basis, opts);
  }
  if (opts.compute_gap) {
    if (!res.unique) {
      res.gap = 0.0;
    } else {
      res.gap = gen ? spectral_gap(*gen) : spectral_gap(h, collapse);
    }
  }
  return res;
}

SteadyResult steady_state(const OpenSystem& sys, const SteadyOptions& opts) {
  return steady_state(sys.hamiltonian, sys.collapse, opts);
}

SteadyResult steady_state_feedback(const SystemParams& p, const SteadyOptions& opts) {
  return steady_state(full_system(p, true), opts);
}

Operator InvariantSubspace::restrict(const Operator& a) const {
  const std::size_t k = basis.size();
  Operator out(k);
  for (std::size_t c = 0; c < k; ++c) {
    const Ket av = a.apply(basis[c]);
    for (std::size_t r = 0; r < k; ++r) out(r, c) = inner(basis[r], av);
  }
  return out;
}

Operator InvariantSubspace::lift(const Operator& a) const {
  if (a.dim() != basis.size()) throw InvalidArgument("InvariantSubspace::lift: dimension mismatch");
  const std::size_t d = basis.empty() ? 0 : basis.front().size();
  Operator out(d);
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) {
      if (a(r, c) == cplx(0.0)) continue;
      out += a(r, c) * Operator::outer(basis[r], basis[c]);
    }
  return out;
}

InvariantSubspace invariant_subspace(const Operator& h, const std::vector<Operator>& collapse,
                                     const std::vector<Ket>& seeds, double tol) {
  require_shared_dim(h, collapse, "invariant_subspace");
  std::vector<Operator> maps{h};
  for (const auto& l : collapse) {
    maps.push_back(l);
    maps.push_back(l.adjoint() * l);
  }
  InvariantSubspace sub;
  std::vector<Ket> pending(seeds.rbegin(), seeds.rend());
  while (!pending.empty() && sub.basis.size() < h.dim()) {
    Ket v = std::move(pending.back());
    pending.pop_back();
    if (v.size() != h.dim()) throw InvalidArgument("invariant_subspace: seed dimension mismatch");
    const double original = norm(v);
    if (original == 0.0) continue;
    // Two Gram-Schmidt passes keep the basis orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : sub.basis) {
        const cplx c = inner(b, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
      }
    const double rest = norm(v);
    if (rest <= tol * std::max(1.0, original)) continue;
    for (auto& x : v) x /= rest;
    for (const auto& m : maps) pending.push_back(m.apply(v));
    sub.basis.push_back(std::move(v));
  }
  return sub;
}

SteadyResult steady_state_in_subspace(const Operator& h, const std::vector<Operator>& collapse,
                                      const std::vector<Ket>& seeds, const SteadyOptions& opts) {
  const InvariantSubspace sub = invariant_subspace(h, collapse, seeds);
  if (sub.dim() == 0) throw InvalidArgument("steady_state_in_subspace: seeds span nothing");
  std::vector<Operator> restricted;
  restricted.reserve(collapse.size());
  for (const auto& l : collapse) restricted.push_back(sub.restrict(l));
  SteadyResult res = steady_state(sub.restrict(h), restricted, opts);
  res.rho_ss = sub.lift(res.rho_ss);
  return res;
}

double spectral_gap(const RealMatrix& gen) {
  if (gen.rows != gen.cols) throw InvalidArgument("spectral_gap: generator must be square");
  // zgeev on the complexified matrix; measured faster than dgeev at the
  // sizes used here.
  Operator m(gen.rows);
  for (std::size_t i = 0; i < gen.data.size(); ++i) m.data()[i] = gen.data[i];
  std::vector<cplx> ev;
  try {
    ev = eigenvalues(m);
  } catch (const SolverError& e) {
    throw SolverError(std::string("spectral_gap: ") + e.what());
  }
  const double threshold = 1e-10 * gen.frobenius_norm();
  double gap = std::numeric_limits<double>::infinity();
  for (const cplx& l : ev)
    if (std::abs(l) > threshold) gap = std::min(gap, std::abs(l.real()));
  return std::isfinite(gap) ? gap : 0.0;
}

double spectral_gap(const Operator& h, const std::vector<Operator>& collapse) {
  return spectral_gap(real_liouvillian(h, collapse));
}

RealMatrix expm(const RealMatrix& a) {
  if (a.rows != a.cols) throw InvalidArgument("expm: matrix must be square");
  for (double v : a.data)
    if (!std::isfinite(v)) throw InvalidArgument("expm: matrix has non-finite entries");
  RealMatrix out(a.rows, a.cols);
  if (a.rows == 0) return out;
  const RMatrix e = view(a).exp();
  std::copy(e.data(), e.data() + e.size(), out.data.begin());
  return out;
}

RealMatrix liouvillian_propagator(const RealMatrix& generator, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("liouvillian_propagator: time must be finite");
  RealMatrix scaled = generator;
  for (double& e : scaled.data) e *= t;
  return expm(scaled);
}

}  // namespace zd
