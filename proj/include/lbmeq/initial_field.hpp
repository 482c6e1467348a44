#ifndef LBMEQ_INITIAL_FIELD_HPP_
#define LBMEQ_INITIAL_FIELD_HPP_

#include <array>
#include <vector>

#include "lbmeq/equilibrium.hpp"
#include "lbmeq/grid.hpp"

namespace lbmeq {

using Point = std::array<double, kMaxDim>;

// amplitude * sin(2 pi (n . x / L) + phase) added to one conserved component
// (0 = rho, 1.. = q^alpha). `mode` holds the integer mode numbers per axis.
struct FourierMode {
  int component = 0;
  double amplitude = 0.0;
  std::array<int, kMaxDim> mode{};
  double phase = 0.0;

  bool operator==(const FourierMode&) const = default;
};

// W(x) = base + sum of Fourier modes on a periodic box of side lengths L_a.
struct InitialField {
  ConservedState base;
  std::vector<FourierMode> modes;

  ConservedState value(const Point& x, const Point& lengths) const;
  // dW/dx_beta for beta = 0..d-1.
  std::array<ConservedState, kMaxDim> gradient(const Point& x, const Point& lengths) const;

  // Smallest density the field can reach; must stay positive.
  double min_density_bound() const;

  bool operator==(const InitialField&) const = default;
};

// Physical position of a node, x_a = i_a dx.
Point node_position(const NodeIndex& node, double dx);
// Box side lengths L_a = N_a dx.
Point box_lengths(const GridShape& shape, double dx);

} // namespace lbmeq

#endif // LBMEQ_INITIAL_FIELD_HPP_
