#include "zd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "eigen_bridge.hpp"

namespace zd {

using detail::CMatrix;
using detail::view;

Operator tensor_product(const Operator& a, const Operator& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  Operator out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0)) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

Operator tensor_product(std::initializer_list<Operator> factors) {
  if (factors.size() == 0) throw InvalidArgument("tensor_product: no factors");
  auto it = factors.begin();
  Operator out = *it++;
  for (; it != factors.end(); ++it) out = tensor_product(out, *it);
  return out;
}

Ket tensor_product(std::span<const cplx> a, std::span<const cplx> b) {
  Ket out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
  return out;
}

Operator embed(const Operator& op, std::size_t slot_index, const SpaceLayout& layout) {
  if (slot_index >= layout.size()) {
    throw InvalidArgument("embed: slot " + std::to_string(slot_index) + " out of range for a " +
                          std::to_string(layout.size()) + "-slot layout");
  }
  if (op.dim() != layout.dim(slot_index)) {
    throw InvalidArgument("embed: operator for slot " + std::to_string(slot_index) + " must have dim " +
                          std::to_string(layout.dim(slot_index)) + ", got " + std::to_string(op.dim()));
  }
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t s = 0; s < slot_index; ++s) left *= layout.dim(s);
  for (std::size_t s = slot_index + 1; s < layout.size(); ++s) right *= layout.dim(s);

  const std::size_t d = op.dim();
  Operator out(layout.total_dim());
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const cplx v = op(i, j);
        if (v == cplx(0.0)) continue;
        for (std::size_t r = 0; r < right; ++r) out((l * d + i) * right + r, (l * d + j) * right + r) = v;
      }
  return out;
}

Operator partial_trace(const Operator& rho, const std::set<std::size_t>& keep, const SpaceLayout& layout) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set must not be empty");
  if (*keep.rbegin() >= layout.size()) throw InvalidArgument("partial_trace: kept slot out of range");
  if (rho.dim() != layout.total_dim()) {
    throw InvalidArgument("partial_trace: operator dim " + std::to_string(rho.dim()) +
                          " does not match layout dim " + std::to_string(layout.total_dim()));
  }
  const std::size_t n = layout.total_dim();
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (std::size_t s = 0; s < layout.size(); ++s) (keep.count(s) ? kept_dim : traced_dim) *= layout.dim(s);

  // Split every flat index into (kept, traced) flat indices.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups(traced_dim);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    std::size_t kept = 0, kept_stride = 1;
    std::size_t traced = 0, traced_stride = 1;
    for (std::size_t s = layout.size(); s-- > 0;) {
      const std::size_t d = layout.dim(s);
      const std::size_t digit = rem % d;
      rem /= d;
      if (keep.count(s)) {
        kept += digit * kept_stride;
        kept_stride *= d;
      } else {
        traced += digit * traced_stride;
        traced_stride *= d;
      }
    }
    groups[traced].emplace_back(flat, kept);
  }

  Operator out(kept_dim);
  for (const auto& group : groups)
    for (const auto& [fi, ki] : group)
      for (const auto& [fj, kj] : group) out(ki, kj) += rho(fi, fj);
  return out;
}

HermitianEigen hermitian_eigen(const Operator& h) {
  HermitianEigen out{std::vector<double>(h.dim()), Operator(h.dim())};
  if (h.dim() == 0) return out;
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(view(h));
  if (es.info() != Eigen::Success) throw SolverError("hermitian_eigen: eigensolver did not converge");
  for (std::size_t k = 0; k < h.dim(); ++k) out.values[k] = es.eigenvalues()[static_cast<Eigen::Index>(k)];
  view(out.vectors) = es.eigenvectors();
  return out;
}

std::vector<double> hermitian_eigenvalues(const Operator& h) {
  std::vector<double> values(h.dim());
  if (h.dim() == 0) return values;
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(view(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("hermitian_eigenvalues: eigensolver did not converge");
  for (std::size_t k = 0; k < h.dim(); ++k) values[k] = es.eigenvalues()[static_cast<Eigen::Index>(k)];
  return values;
}

Operator unitary_from_generator(const Operator& generator, double herm_tol) {
  const double scale = std::max(1.0, generator.max_abs());
  if (!generator.is_hermitian(herm_tol * scale)) {
    throw InvalidArgument("unitary_from_generator: generator is not hermitian");
  }
  const auto eig = hermitian_eigen(generator);
  const std::size_t n = generator.dim();
  Operator out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx phase = std::polar(1.0, -eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = eig.vectors(i, k) * phase;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

std::vector<Ket> nullspace_solve(const Operator& m, double tol) { return nullspace_analysis(m, tol).basis; }

NullSpace nullspace_analysis(const Operator& m, double tol) {
  if (m.dim() == 0) return {};
  const Eigen::BDCSVD<CMatrix> svd(view(m), Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw SolverError("nullspace_analysis: SVD did not converge");
  const auto& s = svd.singularValues();
  const auto& v = svd.matrixV();

  const double threshold = tol * std::max(1.0, m.frobenius_norm());
  NullSpace out;
  out.singular_values.assign(s.data(), s.data() + s.size());
  for (Eigen::Index k = s.size(); k-- > 0;) {
    if (s[k] > threshold) break;
    Ket vk(m.dim());
    for (std::size_t j = 0; j < m.dim(); ++j) vk[j] = v(static_cast<Eigen::Index>(j), k);
    out.basis.push_back(std::move(vk));
  }
  return out;
}

std::vector<double> singular_values(const Operator& m) {
  if (m.dim() == 0) return {};
  const Eigen::BDCSVD<CMatrix> svd(view(m));
  if (svd.info() != Eigen::Success) throw SolverError("singular_values: SVD did not converge");
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<cplx> eigenvalues(const Operator& m) {
  if (m.dim() == 0) return {};
  const Eigen::ComplexEigenSolver<CMatrix> es(view(m), false);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalues: eigensolver did not converge");
  const auto& w = es.eigenvalues();
  return {w.data(), w.data() + w.size()};
}

}  // namespace zd
