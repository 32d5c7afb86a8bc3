#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zd/model.hpp"
#include "zd/operator.hpp"

namespace zd {

/// Dense real matrix, row-major.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double frobenius_norm() const;
};

/// Column-stacking vectorization: vec(rho)[j * d + i] = rho(i, j).
Ket vectorize(const Operator& rho);
Operator unvectorize(std::span<const cplx> v);

/// Complex Liouvillian acting on column-stacked density matrices:
///   L = -i (I (x) H - H^T (x) I)
///       + sum_j [conj(L_j) (x) L_j - 1/2 I (x) L_j^dag L_j - 1/2 (L_j^dag L_j)^T (x) I].
Operator liouvillian_matrix(const Operator& h, const std::vector<Operator>& collapse);

/// Orthonormal basis of d x d hermitian matrices under <A, B> = Tr(A B).
///
/// Element 0 is I / sqrt(d). Elements 1..d-1 are traceless diagonal
/// (Helmert) matrices. The rest come in pairs per (j < k):
/// (E_jk + E_kj) / sqrt(2) and i (E_jk - E_kj) / sqrt(2).
/// Because the generator maps hermitian matrices to hermitian matrices, its
/// matrix in this basis is real.
class HermitianBasis {
 public:
  explicit HermitianBasis(std::size_t d);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return d_ * d_; }

  /// Real coordinates of a hermitian matrix (only the upper triangle and the
  /// real diagonal are read).
  std::vector<double> coordinates(const Operator& m) const;
  /// sum_a x[a] B_a.
  Operator compose(std::span<const double> x) const;

 private:
  std::size_t d_;
  std::vector<double> helmert_;  // (d-1) x d, row k-1 holds diagonal element k
};

/// Generator in HermitianBasis coordinates: column b holds the coordinates of
/// L(B_b). Row 0 vanishes for trace-preserving generators.
RealMatrix real_liouvillian(const Operator& h, const std::vector<Operator>& collapse);

enum class SteadyMethod {
  Qr,                // null vector from a QR factorization of the real generator
  Svd,               // full complex SVD of liouvillian_matrix
  TraceReplacement,  // LU solve with one equation replaced by Tr(rho) = 1
};

struct SteadyOptions {
  SteadyMethod method = SteadyMethod::Qr;
  double null_tol = 1e-10;
  /// unique requires sigma_2 > uniqueness_ratio * sigma_1.
  double uniqueness_ratio = 1e3;
  bool compute_gap = false;
};

struct SteadyResult {
  Operator rho_ss;
  double residual = 0.0;        // ||L vec(rho_ss)||_2
  double generator_norm = 0.0;  // ||L||_F
  bool unique = false;
  double sigma_min = 0.0;     // smallest singular value (unit null candidate)
  double sigma_second = 0.0;  // second smallest
  std::optional<double> gap;
};

/// Solves L(rho) = 0 with Tr(rho) = 1. Throws SolverError when no numerical
/// null space exists and InvalidArgument without collapse operators.
SteadyResult steady_state(const Operator& h, const std::vector<Operator>& collapse, const SteadyOptions& opts = {});
SteadyResult steady_state(const OpenSystem& sys, const SteadyOptions& opts = {});

/// Full model at p.fock_cutoff with the feedback jump. Requires kappa > 0.
SteadyResult steady_state_feedback(const SystemParams& p, const SteadyOptions& opts = {});

/// Orthonormal basis of the smallest subspace that contains `seeds` and is
/// mapped into itself by H, every L_j and every L_j^dag L_j. Any state
/// supported there stays there, so the master equation restricts to it
/// exactly.
struct InvariantSubspace {
  std::vector<Ket> basis;

  std::size_t dim() const { return basis.size(); }
  /// V^dag A V
  Operator restrict(const Operator& a) const;
  /// V A V^dag
  Operator lift(const Operator& a) const;
};

InvariantSubspace invariant_subspace(const Operator& h, const std::vector<Operator>& collapse,
                                     const std::vector<Ket>& seeds, double tol = 1e-10);

/// Steady state of the master equation restricted to
/// invariant_subspace(h, collapse, seeds). rho_ss is lifted back to the full
/// space; residual and uniqueness refer to the restricted generator.
SteadyResult steady_state_in_subspace(const Operator& h, const std::vector<Operator>& collapse,
                                      const std::vector<Ket>& seeds, const SteadyOptions& opts = {});

/// min |Re lambda| over eigenvalues with |lambda| > 1e-10 ||L||_F; 0 when
/// every eigenvalue is numerically zero.
double spectral_gap(const Operator& h, const std::vector<Operator>& collapse);
double spectral_gap(const RealMatrix& generator);

/// exp(t L) in HermitianBasis coordinates.
RealMatrix liouvillian_propagator(const RealMatrix& generator, double t);

/// Dense real matrix exponential (Pade approximant with scaling and squaring).
RealMatrix expm(const RealMatrix& a);

}  // namespace zd
