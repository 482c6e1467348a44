#include <algorithm>
#include <numbers>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lbmeq/error.hpp"
#include "lbmeq/scheme.hpp"
#include "lbmeq/setup.hpp"

using namespace lbmeq;

namespace {

Scheme d2q9_scheme(std::vector<double> rates, double dx = 1.0 / 32) {
  SchemeSetup s;
  s.rates = std::move(rates);
  return s.build(dx);
}

SchemeState random_populations(const GridShape& shape, int q, std::uint64_t seed) {
  SchemeState state(shape, q);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& f : state.data())
    f = u(rng);
  return state;
}

} // namespace

TEST_CASE("SchemeParams enforces the stability bound") {
  CHECK_THROWS_AS(SchemeParams(0.1, 0.1, {2.5}, 1, 3), InvalidRelaxation);
  CHECK_THROWS_AS(SchemeParams(0.1, 0.1, {0.0}, 1, 3), InvalidRelaxation);
  CHECK_THROWS_AS(SchemeParams(0.1, 0.1, {1.0, 1.0}, 1, 3), InvalidRelaxation);
  try {
    SchemeParams(0.1, 0.1, {2.5}, 1, 3);
  } catch (const InvalidRelaxation& e) {
    CHECK(std::string(e.what()).find("0 < s <= 2") != std::string::npos);
  }
  const SchemeParams p(0.1, 0.05, {2.0}, 1, 3);
  CHECK(p.lambda() == 2.0);
  CHECK(p.rate(2) == 2.0);
  CHECK(p.tau(2) == doctest::Approx(0.025));
}

TEST_CASE("CFL number is one for every moving velocity") {
  const auto scheme = d2q9_scheme(std::vector<double>(6, 1.5));
  for (int j = 0; j < 9; ++j)
    CHECK(scheme.params().cfl(scheme.velocity_set(), j) == (j == 0 ? 0.0 : 1.0));
}

TEST_CASE("moments_of") {
  const auto mm = build_moment_matrix(VelocitySet::builtin("D1Q3"), 1.0);
  SchemeState one(GridShape({1}), 3);
  one.at(0, 0) = 1;
  one.at(0, 1) = 2;
  one.at(0, 2) = 3;
  const auto m = moments_of(one, mm);
  CHECK(m == std::vector<double>{6, -1, 5});

  SchemeState zero(GridShape({4}), 3);
  for (double v : moments_of(zero, mm))
    CHECK(v == 0.0);

  SchemeState wrong(GridShape({4}), 9);
  CHECK_THROWS_AS(moments_of(wrong, mm), ShapeError);
}

TEST_CASE("equilibrium initialisation reproduces W") {
  const auto scheme = d2q9_scheme(std::vector<double>(6, 1.5));
  const GridShape g({8, 8});
  const auto state = scheme.equilibrium_state(g, [](const NodeIndex& n) {
    return ConservedState{1.0 + 0.01 * n[0], {0.001 * n[1], -0.002 * n[0]}};
  });
  const auto w = conserved_field(state, scheme.moments());
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const NodeIndex i = g.multi(n);
    CHECK(w[n].rho == doctest::Approx(1.0 + 0.01 * i[0]).epsilon(1e-14));
    CHECK(std::abs(w[n].q[0] - 0.001 * i[1]) <= 1e-15);
    CHECK(std::abs(w[n].q[1] + 0.002 * i[0]) <= 1e-15);
  }
}

TEST_CASE("relaxation ODE Euler step") {
  CHECK(relaxation_ode_euler_step(1.0, 0.0, 1.0, 1.0) == 0.0);
  CHECK(relaxation_ode_euler_step(1.0, 0.0, 0.5, 1.0) == -1.0);
  CHECK(relaxation_ode_euler_step(3.0, 1.0, 2.0, 1.0) == 2.0);
}

TEST_CASE("collide update equals the ODE Euler step bit for bit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0), s(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    // The ODE is given (tau, dt); the scheme uses s = dt / tau.
    const double dt = 0.01;
    const double tau = dt / (2.0 - s(rng));
    const double rate = dt / tau;
    const SchemeParams p(1.0, dt, {rate}, 1, 3);
    const std::vector<double> m{u(rng), u(rng), u(rng)};
    const std::vector<double> m_eq{m[0], m[1], u(rng)};
    std::vector<double> star(3);
    collide_moments(m, m_eq, p, star);
    CHECK(star[0] == m[0]);
    CHECK(star[1] == m[1]);
    CHECK(star[2] == relaxation_ode_euler_step(m[2], m_eq[2], tau, dt));
  }
}

TEST_CASE("collide at s = 1 and s = 2") {
  const GridShape g({4, 4});
  for (double rate : {1.0, 2.0}) {
    const auto scheme = d2q9_scheme(std::vector<double>(6, rate));
    const auto& mm = scheme.moments();
    auto state = random_populations(g, 9, 3);
    const auto m = moments_of(state, mm);
    scheme.collide(state);
    const auto after = moments_of(state, mm);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      const ConservedState w{m[n * 9], {m[n * 9 + 1], m[n * 9 + 2]}};
      const auto m_eq = equilibrium_moments(scheme.model(), mm, w);
      for (int k = 0; k < 9; ++k) {
        const double expected = k < 3 ? m[n * 9 + k] : (rate == 1.0 ? m_eq[k] : 2 * m_eq[k] - m[n * 9 + k]);
        CHECK(std::abs(after[n * 9 + k] - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
      }
    }
  }
}

TEST_CASE("collide leaves an equilibrium unchanged") {
  const auto scheme = d2q9_scheme({1.2, 1.1, 1.3, 1.3, 1.5, 1.9});
  const GridShape g({6, 6});
  auto state = scheme.equilibrium_state(g, [](const NodeIndex& n) {
    return ConservedState{1.0 + 0.1 * std::sin(n[0]), {0.02 * std::cos(n[1]), 0.01}};
  });
  const auto before = state.data();
  scheme.collide(state);
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(std::abs(state.data()[i] - before[i]) <= 1e-15);
}

TEST_CASE("collide preserves conserved moments per node") {
  const auto scheme = d2q9_scheme({1.2, 1.5, 1.9, 1.2, 1.5, 1.9});
  const GridShape g({8, 8});
  auto state = random_populations(g, 9, 21);
  const auto before = conserved_field(state, scheme.moments());
  scheme.collide(state);
  const auto after = conserved_field(state, scheme.moments());
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(after[n][i] - before[n][i]) <= 1e-13 * before[n].rho);
}

TEST_CASE("stream moves a pulse by e_j") {
  const auto vs = VelocitySet::builtin("D2Q9");
  const GridShape g({8, 8});
  for (int j = 0; j < 9; ++j) {
    SchemeState state(g, 9);
    state.at(g.linear({7, 0}), j) = 1.0;
    stream(state, vs);
    const NodeIndex target = neighbor_index({7, 0}, j, g, vs);
    for (std::size_t n = 0; n < g.node_count(); ++n)
      for (int i = 0; i < 9; ++i)
        CHECK(state.at(n, i) == ((n == g.linear(target) && i == j) ? 1.0 : 0.0));
  }
}

TEST_CASE("stream of a uniform field is the identity") {
  const auto vs = VelocitySet::builtin("D1Q3");
  SchemeState state(GridShape({10}), 3);
  for (std::size_t n = 0; n < 10; ++n)
    for (int j = 0; j < 3; ++j)
      state.at(n, j) = 0.25 * (j + 1);
  const auto before = state.data();
  stream(state, vs);
  CHECK(state.data() == before);
  SchemeState wrong(GridShape({4, 4}), 3);
  CHECK_THROWS_AS(stream(wrong, vs), ShapeError);
}

TEST_CASE("L streams on a periodic axis of length L return every value") {
  const auto vs = VelocitySet::builtin("D2Q9");
  const GridShape g({6, 6});
  auto state = random_populations(g, 9, 8);
  const auto before = state.data();
  for (int i = 0; i < 6; ++i)
    stream(state, vs);
  CHECK(state.data() == before);
  // A single stream is a permutation, not the identity.
  stream(state, vs);
  CHECK(state.data() != before);
  auto sorted_a = state.data();
  auto sorted_b = before;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  CHECK(sorted_a == sorted_b);
}

TEST_CASE("run: zero steps, fixed points, conservation, divergence") {
  auto scheme = d2q9_scheme({1.2, 1.5, 1.9, 1.2, 1.5, 1.9});
  const GridShape g({32, 32});
  auto uniform = scheme.equilibrium_state(g, [](const NodeIndex&) {
    return ConservedState{1.0, {0.01, -0.02}};
  });
  const auto initial = uniform.data();
  scheme.run(uniform, 0);
  CHECK(uniform.data() == initial);
  CHECK(uniform.step_count() == 0);
  scheme.run(uniform, 50);
  CHECK(uniform.step_count() == 50);
  CHECK(uniform.time(scheme.params().dt()) == doctest::Approx(50.0 / 32));
  for (std::size_t i = 0; i < initial.size(); ++i)
    CHECK(std::abs(uniform.data()[i] - initial[i]) <= 1e-13);

  auto wave = scheme.equilibrium_state(g, [](const NodeIndex& n) {
    const double x = 2 * std::numbers::pi * n[0] / 32.0;
    return ConservedState{1.0 + 0.01 * std::sin(x), {0.0, 0.01 * std::cos(x)}};
  });
  const auto t0 = conserved_totals(wave, scheme.moments());
  scheme.run(wave, 1000);
  const auto t1 = conserved_totals(wave, scheme.moments());
  CHECK(std::abs(t1.mass - t0.mass) <= 1e-12 * t0.mass);

  SchemeState bad(g, 9);
  for (double& f : bad.data())
    f = -1.0;
  CHECK_THROWS_AS(scheme.run(bad, 1), SimulationDiverged);
}

TEST_CASE("Scheme rejects inconsistent pieces") {
  const auto vs = VelocitySet::builtin("D2Q9");
  const auto mm = build_moment_matrix(vs, 2.0);
  const auto model = EquilibriumModel::builtin("d2q9-polynomial", vs, 2.0);
  // dx / dt = 1 but the matrix was built for lambda = 2.
  CHECK_THROWS_AS(Scheme(vs, mm, model, SchemeParams(0.1, 0.1, std::vector<double>(6, 1.0), 2, 9)),
                  ConstructionError);
  CHECK_NOTHROW(Scheme(vs, mm, model, SchemeParams(0.2, 0.1, std::vector<double>(6, 1.0), 2, 9)));
}
