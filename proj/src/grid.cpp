#include "lbmeq/grid.hpp"

#include <string>

#include "lbmeq/error.hpp"

namespace lbmeq {

GridShape::GridShape(std::vector<int> extents) : extents_(std::move(extents)) {
  if (extents_.empty() || extents_.size() > static_cast<std::size_t>(kMaxDim))
    throw ShapeError("grid must have 1 or 2 axes, got " + std::to_string(extents_.size()));
  for (int n : extents_)
    if (n < 1)
      throw ShapeError("grid extents must be positive");

  count_ = 1;
  for (int a = dim() - 1; a >= 0; --a) {
    strides_[a] = count_;
    count_ *= static_cast<std::size_t>(extents_[a]);
  }
}

std::size_t GridShape::linear(const NodeIndex& node) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim(); ++a)
    idx += static_cast<std::size_t>(node[a]) * strides_[a];
  return idx;
}

NodeIndex GridShape::multi(std::size_t linear) const {
  NodeIndex node{};
  for (int a = 0; a < dim(); ++a) {
    node[a] = static_cast<int>(linear / strides_[a]);
    linear %= strides_[a];
  }
  return node;
}

bool GridShape::contains(const NodeIndex& node) const {
  for (int a = 0; a < dim(); ++a)
    if (node[a] < 0 || node[a] >= extents_[a])
      return false;
  for (int a = dim(); a < kMaxDim; ++a)
    if (node[a] != 0)
      return false;
  return true;
}

int GridShape::wrap(int axis, long coordinate) const {
  const long n = extents_[axis];
  long r = coordinate % n;
  if (r < 0)
    r += n;
  return static_cast<int>(r);
}

} // namespace lbmeq
