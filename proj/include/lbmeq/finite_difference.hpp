#ifndef LBMEQ_FINITE_DIFFERENCE_HPP_
#define LBMEQ_FINITE_DIFFERENCE_HPP_

#include <span>

#include "lbmeq/grid.hpp"

namespace lbmeq {

// Fourth-order centered first derivative along `axis` on the periodic grid,
//   (-u[i+2] + 8 u[i+1] - 8 u[i-1] + u[i-2]) / (12 dx),
// of the scalar stored at values[n * stride + offset]. Writes one value per
// node into `out`.
void centered_derivative(std::span<const double> values, std::size_t stride, std::size_t offset,
                         const GridShape& shape, int axis, double dx, std::span<double> out);

} // namespace lbmeq

#endif // LBMEQ_FINITE_DIFFERENCE_HPP_
