#ifndef LBMEQ_GRID_HPP_
#define LBMEQ_GRID_HPP_

#include <array>
#include <cstddef>
#include <vector>

namespace lbmeq {

inline constexpr int kMaxDim = 2;

using NodeIndex = std::array<int, kMaxDim>;

// Extents of a periodic (toroidal) grid with 1 or 2 axes. Nodes are stored in
// row-major order of their multi-index: the last axis varies fastest.
class GridShape {
public:
  GridShape() = default;
  explicit GridShape(std::vector<int> extents);

  int dim() const { return static_cast<int>(extents_.size()); }
  int extent(int axis) const { return extents_[axis]; }
  const std::vector<int>& extents() const { return extents_; }

  std::size_t node_count() const { return count_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::size_t linear(const NodeIndex& node) const;
  NodeIndex multi(std::size_t linear) const;
  bool contains(const NodeIndex& node) const;

  // Periodic wrap of an arbitrary integer coordinate onto [0, extent).
  int wrap(int axis, long coordinate) const;

  bool operator==(const GridShape&) const = default;

private:
  std::vector<int> extents_;
  std::array<std::size_t, kMaxDim> strides_{};
  std::size_t count_ = 0;
};

} // namespace lbmeq

#endif // LBMEQ_GRID_HPP_
