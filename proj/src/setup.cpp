#include "lbmeq/setup.hpp"

#include "lbmeq/error.hpp"

namespace lbmeq {

MomentMatrix SchemeSetup::moment_matrix() const {
  return build_moment_matrix(velocities, lambda, higher_rows);
}

EquilibriumModel SchemeSetup::equilibrium() const {
  const std::string kind =
      equilibrium_kind.empty() ? EquilibriumModel::default_kind(velocities) : equilibrium_kind;
  if (kind == "table") {
    if (weights.empty())
      throw InvalidEquilibrium("a table equilibrium needs weights");
    return EquilibriumModel::table(velocities, lambda, weights,
                                   cs2.value_or(lambda * lambda / 3.0), coefficients);
  }
  return EquilibriumModel::builtin(kind, velocities, lambda, cs2);
}

Scheme SchemeSetup::build(double dx) const { return build(dx, dx / lambda); }

Scheme SchemeSetup::build(double dx, double dt) const {
  SchemeParams params(dx, dt, rates, velocities.dim(), velocities.size());
  return Scheme(velocities, moment_matrix(), equilibrium(), std::move(params));
}

} // namespace lbmeq
