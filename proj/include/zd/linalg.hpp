#pragma once

#include <set>
#include <vector>

#include "zd/layout.hpp"
#include "zd/operator.hpp"

namespace zd {

/// Kronecker product: (A ⊗ B)[i*dB + k, j*dB + l] = A[i,j] * B[k,l].
Operator tensor_product(const Operator& a, const Operator& b);
Operator tensor_product(std::initializer_list<Operator> factors);
Ket tensor_product(std::span<const cplx> a, std::span<const cplx> b);

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at `slot_index`.
Operator embed(const Operator& op, std::size_t slot_index, const SpaceLayout& layout);

/// Reduced operator on the kept slots, in their original relative order.
Operator partial_trace(const Operator& rho, const std::set<std::size_t>& keep,
                       const SpaceLayout& layout);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Operator vectors;            // column k is the eigenvector of values[k]
};

HermitianEigen hermitian_eigen(const Operator& h);
std::vector<double> hermitian_eigenvalues(const Operator& h);

/// exp(-i G) for hermitian G, via eigendecomposition.
Operator unitary_from_generator(const Operator& generator, double herm_tol = 1e-12);

struct NullSpace {
  std::vector<Ket> basis;                // increasing singular value
  std::vector<double> singular_values;   // all of them, descending
};

/// Full SVD of M; basis holds the right singular vectors with
/// sigma <= tol * max(1, ||M||_F).
NullSpace nullspace_analysis(const Operator& m, double tol = 1e-10);

/// Orthonormal basis of {v : ||M v|| <= tol * max(1, ||M||_F)}, computed from a
/// full singular value decomposition. Vectors are ordered by increasing
/// singular value.
std::vector<Ket> nullspace_solve(const Operator& m, double tol = 1e-10);

/// Singular values of M, descending.
std::vector<double> singular_values(const Operator& m);

/// Eigenvalues of a general complex matrix (unordered).
std::vector<cplx> eigenvalues(const Operator& m);

}  // namespace zd
