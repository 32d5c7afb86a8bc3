#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace zd {

/// Atomic level indices within one four-level atom.
namespace level {
inline constexpr std::size_t g = 0;
inline constexpr std::size_t e = 1;
inline constexpr std::size_t p = 2;
inline constexpr std::size_t r = 3;
inline constexpr std::size_t count = 4;
}  // namespace level

/// Subsystem slots of the atom-atom-cavity space.
namespace slot {
inline constexpr std::size_t atom1 = 0;
inline constexpr std::size_t atom2 = 1;
inline constexpr std::size_t cavity = 2;
}  // namespace slot

/// Ordered subsystem dimensions of a tensor-product space.
///
/// Slot 0 is the most significant index: a basis state (i0, i1, ..., ik) maps
/// to the flat index ((i0 * d1 + i1) * d2 + ...) * dk + ik. This is the
/// convention of tensor_product(A, B) with A on the left.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  SpaceLayout(std::initializer_list<std::size_t> dims);
  explicit SpaceLayout(std::vector<std::size_t> dims);

  /// [4, 4, fock_cutoff + 1]
  static SpaceLayout atoms_and_cavity(std::size_t fock_cutoff);
  /// [4, 4]
  static SpaceLayout atoms_only();

  std::size_t size() const { return dims_.size(); }
  std::size_t dim(std::size_t slot) const { return dims_.at(slot); }
  std::size_t total_dim() const { return total_; }
  const std::vector<std::size_t>& dims() const { return dims_; }

  /// Flat index of a multi-index, one entry per slot.
  std::size_t flat_index(std::initializer_list<std::size_t> idx) const;

  bool operator==(const SpaceLayout&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 0;
};

}  // namespace zd
