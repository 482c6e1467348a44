#include "lbmeq/equilibrium.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lbmeq/error.hpp"

namespace lbmeq {

namespace {

void require_positive_density(const ConservedState& w) {
  if (!(w.rho > 0.0) || !std::isfinite(w.rho)) {
    std::ostringstream msg;
    msg << "equilibrium requires rho > 0, got rho = " << w.rho;
    throw NonPositiveDensity(msg.str());
  }
}

} // namespace

EquilibriumModel::EquilibriumModel(std::string kind, const VelocitySet& vs, double lambda,
                                   std::vector<double> w, double cs2, PolynomialCoefficients coef)
    : kind_(std::move(kind)), dim_(vs.dim()), q_(vs.size()), lambda_(lambda), cs2_(cs2),
      w_(std::move(w)), v_(static_cast<std::size_t>(vs.size()) * kMaxDim, 0.0), coef_(coef) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidEquilibrium("velocity scale lambda must be positive");
  if (!(cs2 > 0.0) || !std::isfinite(cs2))
    throw InvalidEquilibrium("sound speed squared must be positive");
  if (static_cast<int>(w_.size()) != q_)
    throw InvalidEquilibrium("equilibrium needs " + std::to_string(q_) + " weights, got " +
                             std::to_string(w_.size()));
  for (int j = 0; j < q_; ++j)
    for (int a = 0; a < dim_; ++a)
      v_[j * kMaxDim + a] = lambda * vs.e(j)[a];
  validate();
}

std::string EquilibriumModel::default_kind(const VelocitySet& vs) {
  if (vs.is_builtin() && vs.name() == "D2Q9")
    return "d2q9-polynomial";
  if (vs.is_builtin() && vs.name() == "D1Q3")
    return "d1q3-polynomial";
  return "table";
}

EquilibriumModel EquilibriumModel::builtin(const std::string& kind, const VelocitySet& vs,
                                           double lambda, std::optional<double> cs2) {
  const double c2 = cs2.value_or(lambda * lambda / 3.0);
  if (kind == "d2q9-polynomial") {
    if (!(vs.is_builtin() && vs.name() == "D2Q9"))
      throw InvalidEquilibrium("d2q9-polynomial requires the D2Q9 velocity set");
    const double a = 4.0 / 9.0, b = 1.0 / 9.0, c = 1.0 / 36.0;
    return EquilibriumModel(kind, vs, lambda, {a, b, b, b, b, c, c, c, c}, c2, {});
  }
  if (kind == "d1q3-polynomial") {
    if (!(vs.is_builtin() && vs.name() == "D1Q3"))
      throw InvalidEquilibrium("d1q3-polynomial requires the D1Q3 velocity set");
    return EquilibriumModel(kind, vs, lambda, {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, c2, {});
  }
  throw InvalidEquilibrium("unknown equilibrium kind '" + kind + "'");
}

EquilibriumModel EquilibriumModel::table(const VelocitySet& vs, double lambda,
                                         std::vector<double> weights, double cs2,
                                         PolynomialCoefficients coefficients) {
  return EquilibriumModel("table", vs, lambda, std::move(weights), cs2, coefficients);
}

void EquilibriumModel::distribution(const ConservedState& w, std::span<double> out) const {
  require_positive_density(w);
  const double inv_rho = 1.0 / w.rho;
  double q2 = 0.0;
  for (int a = 0; a < dim_; ++a)
    q2 += w.q[a] * w.q[a];
  const double c_lin = coef_.linear / cs2_;
  const double c_quad = coef_.quadratic * 0.5 / (cs2_ * cs2_) * inv_rho;
  const double iso = coef_.constant * w.rho + coef_.isotropic * 0.5 / cs2_ * q2 * inv_rho;
  for (int j = 0; j < q_; ++j) {
    double vq = 0.0;
    for (int a = 0; a < dim_; ++a)
      vq += v_[j * kMaxDim + a] * w.q[a];
    out[j] = w_[j] * (iso + c_lin * vq + c_quad * vq * vq);
  }
}

void EquilibriumModel::jacobian(const ConservedState& w, std::span<double> out) const {
  require_positive_density(w);
  const int cols = dim_ + 1;
  const double inv_rho = 1.0 / w.rho;
  double q2 = 0.0;
  for (int a = 0; a < dim_; ++a)
    q2 += w.q[a] * w.q[a];
  const double c4 = cs2_ * cs2_;
  for (int j = 0; j < q_; ++j) {
    double vq = 0.0;
    for (int a = 0; a < dim_; ++a)
      vq += v_[j * kMaxDim + a] * w.q[a];
    out[j * cols] = w_[j] * (coef_.constant - coef_.quadratic * vq * vq * 0.5 / c4 * inv_rho * inv_rho -
                             coef_.isotropic * q2 * 0.5 / cs2_ * inv_rho * inv_rho);
    for (int a = 0; a < dim_; ++a) {
      const double va = v_[j * kMaxDim + a];
      out[j * cols + 1 + a] = w_[j] * (coef_.linear * va / cs2_ +
                                       coef_.quadratic * vq * va / c4 * inv_rho +
                                       coef_.isotropic * w.q[a] / cs2_ * inv_rho);
    }
  }
}

void EquilibriumModel::validate() const {
  double wsum = 0.0;
  for (double x : w_)
    wsum += x;
  if (std::abs(wsum - 1.0) > 1e-12)
    throw InvalidEquilibrium("equilibrium weights must sum to 1");

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> rho_dist(0.5, 2.0);
  const double umax = 0.1 * lambda_ / std::sqrt(static_cast<double>(dim_));
  std::uniform_real_distribution<double> u_dist(-umax, umax);
  std::vector<double> g(q_);
  for (int probe = 0; probe < 100; ++probe) {
    ConservedState w;
    w.rho = rho_dist(rng);
    for (int a = 0; a < dim_; ++a)
      w.q[a] = w.rho * u_dist(rng);
    distribution(w, g);
    double mass = 0.0;
    std::array<double, kMaxDim> mom{};
    for (int j = 0; j < q_; ++j) {
      mass += g[j];
      for (int a = 0; a < dim_; ++a)
        mom[a] += v_[j * kMaxDim + a] * g[j];
    }
    bool ok = std::abs(mass - w.rho) <= 1e-12 * w.rho;
    for (int a = 0; a < dim_; ++a)
      ok = ok && std::abs(mom[a] - w.q[a]) <= 1e-12 * w.rho * lambda_;
    if (!ok) {
      std::ostringstream msg;
      msg << "equilibrium '" << kind_ << "' violates the mass/momentum constraints at rho = "
          << w.rho << " (mass residual " << mass - w.rho << ")";
      throw InvalidEquilibrium(msg.str());
    }
  }
}

std::vector<double> equilibrium_distribution(const EquilibriumModel& model,
                                             const ConservedState& w) {
  std::vector<double> out(model.size());
  model.distribution(w, out);
  return out;
}

std::vector<double> equilibrium_moments(const EquilibriumModel& model, const MomentMatrix& mm,
                                        const ConservedState& w) {
  if (mm.size() != model.size())
    throw ShapeError("moment matrix and equilibrium model sizes differ");
  const std::vector<double> g = equilibrium_distribution(model, w);
  std::vector<double> m(model.size(), 0.0);
  for (int k = 0; k < mm.size(); ++k)
    for (int j = 0; j < mm.size(); ++j)
      m[k] += mm(k, j) * g[j];
  return m;
}

FluxTensor momentum_flux(const EquilibriumModel& model, const ConservedState& w) {
  const std::vector<double> g = equilibrium_distribution(model, w);
  FluxTensor f;
  f.dim = model.dim();
  for (int a = 0; a < f.dim; ++a)
    for (int b = 0; b < f.dim; ++b) {
      double sum = 0.0;
      for (int j = 0; j < model.size(); ++j)
        sum += model.velocity(j, a) * model.velocity(j, b) * g[j];
      f(a, b) = sum;
    }
  return f;
}

RowMatrix equilibrium_jacobian(const EquilibriumModel& model, const ConservedState& w) {
  RowMatrix jac(model.size(), model.dim() + 1);
  model.jacobian(w, std::span<double>(jac.data(), static_cast<std::size_t>(jac.size())));
  return jac;
}

} // namespace lbmeq
