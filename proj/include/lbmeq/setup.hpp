#ifndef LBMEQ_SETUP_HPP_
#define LBMEQ_SETUP_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lbmeq/equilibrium.hpp"
#include "lbmeq/lattice.hpp"
#include "lbmeq/scheme.hpp"

namespace lbmeq {

// Everything that defines a scheme except the space step: lattice, moment
// basis, equilibrium, lambda and the relaxation ratios.
struct SchemeSetup {
  VelocitySet velocities = VelocitySet::builtin("D2Q9");
  std::optional<RowMatrix> higher_rows;
  std::string equilibrium_kind; // empty: default for the velocity set
  std::optional<double> cs2;
  std::vector<double> weights; // "table" equilibria only
  PolynomialCoefficients coefficients;
  double lambda = 1.0;
  std::vector<double> rates; // s_{d+1}..s_J

  MomentMatrix moment_matrix() const;
  EquilibriumModel equilibrium() const;
  // dt = dx / lambda.
  Scheme build(double dx) const;
  // Explicit time step; dx / dt must agree with lambda.
  Scheme build(double dx, double dt) const;
};

} // namespace lbmeq

#endif // LBMEQ_SETUP_HPP_
