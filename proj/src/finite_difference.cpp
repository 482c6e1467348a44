#include "lbmeq/finite_difference.hpp"

#include "lbmeq/error.hpp"

namespace lbmeq {

void centered_derivative(std::span<const double> values, std::size_t stride, std::size_t offset,
                         const GridShape& shape, int axis, double dx, std::span<double> out) {
  if (out.size() != shape.node_count() || values.size() < shape.node_count() * stride)
    throw ShapeError("finite-difference buffers do not match the grid");
  const std::size_t step = shape.stride(axis);
  const double scale = 1.0 / (12.0 * dx);
  for (std::size_t node = 0; node < shape.node_count(); ++node) {
    const int i = shape.multi(node)[axis];
    const std::size_t base = node - static_cast<std::size_t>(i) * step;
    auto at = [&](int offset_i) {
      const std::size_t other = base + static_cast<std::size_t>(shape.wrap(axis, i + offset_i)) * step;
      return values[other * stride + offset];
    };
    out[node] = (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) * scale;
  }
}

} // namespace lbmeq
