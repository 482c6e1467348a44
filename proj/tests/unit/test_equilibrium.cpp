#include <cmath>
#include <random>

#include "doctest.h"
#include "lbmeq/equilibrium.hpp"
#include "lbmeq/error.hpp"

using namespace lbmeq;

namespace {

struct Lattice {
  VelocitySet vs;
  MomentMatrix mm;
  EquilibriumModel model;
};

Lattice make(const char* name, double lambda = 1.0) {
  const auto vs = VelocitySet::builtin(name);
  return {vs, build_moment_matrix(vs, lambda),
          EquilibriumModel::builtin(EquilibriumModel::default_kind(vs), vs, lambda)};
}

// Admissible states: rho in [0.5, 2], |u| <= 0.1 lambda.
ConservedState random_state(std::mt19937_64& rng, int dim, double lambda) {
  std::uniform_real_distribution<double> r(0.5, 2.0), u(-1.0, 1.0);
  ConservedState w;
  w.rho = r(rng);
  double vel[2] = {u(rng), dim == 2 ? u(rng) : 0.0};
  const double norm = std::hypot(vel[0], vel[1]);
  const double speed = 0.1 * lambda * std::abs(u(rng));
  for (int a = 0; a < dim; ++a)
    w.q[a] = w.rho * (norm > 0 ? vel[a] / norm * speed : 0.0);
  return w;
}

} // namespace

TEST_CASE("D2Q9 equilibrium at rest equals the weights") {
  const auto l = make("D2Q9");
  const auto f = equilibrium_distribution(l.model, ConservedState{1.0, {0.0, 0.0}});
  const double w[9] = {4.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9,
                       1.0 / 36, 1.0 / 36, 1.0 / 36, 1.0 / 36};
  for (int j = 0; j < 9; ++j)
    CHECK(f[j] == doctest::Approx(w[j]).epsilon(1e-15));
  CHECK(l.model.sound_speed_sq() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("non-positive density is rejected") {
  const auto l = make("D2Q9");
  CHECK_THROWS_AS(equilibrium_distribution(l.model, ConservedState{-1.0, {0.0, 0.0}}),
                  NonPositiveDensity);
  CHECK_THROWS_AS(momentum_flux(l.model, ConservedState{0.0, {0.0, 0.0}}), NonPositiveDensity);
  CHECK_THROWS_AS(equilibrium_jacobian(l.model, ConservedState{std::nan(""), {0.0, 0.0}}),
                  NonPositiveDensity);
}

TEST_CASE("mismatched kinds and bad tables are construction errors") {
  const auto d1 = VelocitySet::builtin("D1Q3");
  CHECK_THROWS_AS(EquilibriumModel::builtin("d2q9-polynomial", d1, 1.0), InvalidEquilibrium);
  CHECK_THROWS_AS(EquilibriumModel::builtin("maxwellian", d1, 1.0), InvalidEquilibrium);
  // Weights that do not sum to one violate the mass constraint.
  CHECK_THROWS_AS(EquilibriumModel::table(d1, 1.0, {0.5, 0.2, 0.2}, 1.0 / 3.0),
                  InvalidEquilibrium);
  const auto ok = EquilibriumModel::table(d1, 1.0, {2.0 / 3, 1.0 / 6, 1.0 / 6}, 1.0 / 3.0);
  CHECK_FALSE(ok.is_builtin());
}

TEST_CASE("moment constraints on 1000 random admissible states") {
  std::mt19937_64 rng(1234);
  for (const char* name : {"D1Q3", "D2Q9"})
    for (double lambda : {1.0, 2.0}) {
      const auto l = make(name, lambda);
      const int d = l.vs.dim();
      for (int t = 0; t < 1000; ++t) {
        const auto w = random_state(rng, d, lambda);
        const auto f = equilibrium_distribution(l.model, w);
        double mass = 0.0, mom[2] = {0.0, 0.0};
        for (int j = 0; j < l.vs.size(); ++j) {
          mass += f[j];
          for (int a = 0; a < d; ++a)
            mom[a] += l.mm.velocity(j, a) * f[j];
        }
        CHECK(std::abs(mass - w.rho) <= 1e-12 * w.rho);
        for (int a = 0; a < d; ++a)
          CHECK(std::abs(mom[a] - w.q[a]) <= 1e-12 * w.rho * lambda);
      }
    }
}

TEST_CASE("equilibrium moments") {
  const auto l1 = make("D1Q3");
  const auto m = equilibrium_moments(l1.model, l1.mm, ConservedState{1.7, {0.0, 0.0}});
  CHECK(m[0] == doctest::Approx(1.7));
  CHECK(std::abs(m[1]) <= 1e-15);
  CHECK(m[2] == doctest::Approx(1.7 / 3.0).epsilon(1e-14)); // cs^2 rho

  const auto l2 = make("D2Q9");
  const auto m2 = equilibrium_moments(l2.model, l2.mm, ConservedState{2.0, {0.0, 0.0}});
  CHECK(m2[0] == doctest::Approx(2.0));
  CHECK(std::abs(m2[1]) <= 1e-15);
  CHECK(std::abs(m2[2]) <= 1e-15);

  const ConservedState w{1.1, {0.03, -0.02}};
  const auto m3 = equilibrium_moments(l2.model, l2.mm, w);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(m3[i] - w[i]) <= 1e-12);
}

TEST_CASE("momentum flux has the Euler closed form") {
  std::mt19937_64 rng(99);
  const auto l = make("D2Q9");
  const double cs2 = l.model.sound_speed_sq();
  CHECK(momentum_flux(l.model, ConservedState{1.3, {0.0, 0.0}})(0, 0) ==
        doctest::Approx(cs2 * 1.3).epsilon(1e-14));
  for (int t = 0; t < 100; ++t) {
    const auto w = random_state(rng, 2, 1.0);
    const FluxTensor f = momentum_flux(l.model, w);
    const auto feq = equilibrium_distribution(l.model, w);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double closed = w.q[a] * w.q[b] / w.rho + (a == b ? cs2 * w.rho : 0.0);
        CHECK(std::abs(f(a, b) - closed) <= 1e-13);
        double resum = 0.0;
        for (int j = 0; j < 9; ++j)
          resum += l.mm.velocity(j, a) * l.mm.velocity(j, b) * feq[j];
        CHECK(std::abs(f(a, b) - resum) <= 1e-13);
      }
    CHECK(f(0, 1) == f(1, 0));
  }
  const auto l1 = make("D1Q3");
  const ConservedState w1{1.2, {0.05, 0.0}};
  CHECK(momentum_flux(l1.model, w1)(0, 0) ==
        doctest::Approx(1.2 / 3.0 + 0.05 * 0.05 / 1.2).epsilon(1e-14));
}

TEST_CASE("Jacobian at rest and column sums") {
  const auto l = make("D2Q9");
  const RowMatrix jac = equilibrium_jacobian(l.model, ConservedState{1.0, {0.0, 0.0}});
  for (int j = 0; j < 9; ++j)
    CHECK(jac(j, 0) == doctest::Approx(l.model.weights()[j]).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (const char* name : {"D1Q3", "D2Q9"}) {
    const auto lt = make(name);
    const int d = lt.vs.dim();
    for (int t = 0; t < 50; ++t) {
      const auto w = random_state(rng, d, 1.0);
      const RowMatrix jw = equilibrium_jacobian(lt.model, w);
      for (int i = 0; i <= d; ++i) {
        double mass = 0.0, mom[2] = {0.0, 0.0};
        for (int j = 0; j < lt.vs.size(); ++j) {
          mass += jw(j, i);
          for (int a = 0; a < d; ++a)
            mom[a] += lt.mm.velocity(j, a) * jw(j, i);
        }
        CHECK(std::abs(mass - (i == 0 ? 1.0 : 0.0)) <= 1e-12);
        for (int a = 0; a < d; ++a)
          CHECK(std::abs(mom[a] - (i == a + 1 ? 1.0 : 0.0)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("Jacobian agrees with central differences") {
  for (const char* name : {"D1Q3", "D2Q9"}) {
    const auto l = make(name);
    const int d = l.vs.dim();
    ConservedState w{1.2, {0.05, d == 2 ? -0.03 : 0.0}};
    const RowMatrix jac = equilibrium_jacobian(l.model, w);
    double wnorm = 0.0;
    for (int i = 0; i <= d; ++i)
      wnorm = std::max(wnorm, std::abs(w[i]));
    const double h = 1e-6 * std::max(1.0, wnorm);
    for (int i = 0; i <= d; ++i) {
      ConservedState wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const auto fp = equilibrium_distribution(l.model, wp);
      const auto fm = equilibrium_distribution(l.model, wm);
      for (int j = 0; j < l.vs.size(); ++j) {
        const double fd = (fp[j] - fm[j]) / (2 * h);
        CHECK(std::abs(fd - jac(j, i)) <= 1e-6 * std::max(1.0, std::abs(jac(j, i))));
      }
    }
  }
}

TEST_CASE("table equilibrium with standard weights matches the builtin") {
  const auto vs = VelocitySet::builtin("D2Q9");
  const auto builtin = EquilibriumModel::builtin("d2q9-polynomial", vs, 1.0);
  const auto table = EquilibriumModel::table(vs, 1.0, builtin.weights(), 1.0 / 3.0);
  const ConservedState w{0.9, {0.04, 0.01}};
  const auto a = equilibrium_distribution(builtin, w);
  const auto b = equilibrium_distribution(table, w);
  for (int j = 0; j < 9; ++j)
    CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-15));
}
