#include "lbmeq/initial_field.hpp"

#include <cmath>
#include <numbers>

namespace lbmeq {

namespace {

double phase_of(const FourierMode& m, const Point& x, const Point& lengths) {
  double arg = m.phase;
  for (int a = 0; a < kMaxDim; ++a)
    if (m.mode[a] != 0)
      arg += 2.0 * std::numbers::pi * m.mode[a] * x[a] / lengths[a];
  return arg;
}

} // namespace

ConservedState InitialField::value(const Point& x, const Point& lengths) const {
  ConservedState w = base;
  for (const FourierMode& m : modes)
    w[m.component] += m.amplitude * std::sin(phase_of(m, x, lengths));
  return w;
}

std::array<ConservedState, kMaxDim> InitialField::gradient(const Point& x,
                                                           const Point& lengths) const {
  std::array<ConservedState, kMaxDim> g{};
  for (auto& c : g)
    c = ConservedState{0.0, {}};
  for (const FourierMode& m : modes) {
    const double c = m.amplitude * std::cos(phase_of(m, x, lengths));
    for (int a = 0; a < kMaxDim; ++a)
      if (m.mode[a] != 0)
        g[a][m.component] += c * 2.0 * std::numbers::pi * m.mode[a] / lengths[a];
  }
  return g;
}

double InitialField::min_density_bound() const {
  double rho = base.rho;
  for (const FourierMode& m : modes)
    if (m.component == 0)
      rho -= std::abs(m.amplitude);
  return rho;
}

Point node_position(const NodeIndex& node, double dx) {
  Point x{};
  for (int a = 0; a < kMaxDim; ++a)
    x[a] = node[a] * dx;
  return x;
}

Point box_lengths(const GridShape& shape, double dx) {
  Point l{1.0, 1.0};
  for (int a = 0; a < shape.dim(); ++a)
    l[a] = shape.extent(a) * dx;
  return l;
}

} // namespace lbmeq
