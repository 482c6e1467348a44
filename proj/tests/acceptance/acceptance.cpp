// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>

#include "lbmeq/analysis.hpp"
#include "lbmeq/verify.hpp"

using namespace lbmeq;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body,
               double shared_s = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double t =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() + shared_s;
  const bool ok = r.ok && t < limit_s;
  if (!ok)
    ++failures;
  std::printf("criterion %d %-34s %s  %s [%.2f s / %.0f s]\n", id, name, ok ? "PASS" : "FAIL",
              r.detail.c_str(), t, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome relaxation_identity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> val(-1e3, 1e3), rate(0.0, 2.0);
  long mismatches = 0;
  for (int t = 0; t < 10000; ++t) {
    // The ODE is given (tau, dt); the scheme uses s = dt / tau.
    const double dt = std::ldexp(1.0, -static_cast<int>(t % 10)) * 0.7;
    const double tau = dt / (2.0 - rate(rng));
    const double s = dt / tau;
    const SchemeParams p(1.0, dt, {s}, 1, 3);
    const double m[3] = {val(rng), val(rng), val(rng)};
    const double m_eq[3] = {m[0], m[1], val(rng)};
    double star[3];
    collide_moments(m, m_eq, p, star);
    const double ode = relaxation_ode_euler_step(m[2], m_eq[2], tau, dt);
    if (std::memcmp(&ode, &star[2], sizeof(double)) != 0)
      ++mismatches;
  }
  return {mismatches == 0, fmt("%.0f of 10000 triples differ", static_cast<double>(mismatches))};
}

Outcome streaming_exactness() {
  const auto vs = VelocitySet::builtin("D2Q9");
  const GridShape g({64, 64});
  SchemeState state(g, 9);
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& f : state.data())
    f = u(rng);
  const std::vector<double> initial = state.data();
  long bad = 0;
  for (int step = 1; step <= 64; ++step) {
    stream(state, vs);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      const NodeIndex x = g.multi(n);
      for (int j = 0; j < 9; ++j) {
        NodeIndex y = x;
        for (int a = 0; a < 2; ++a)
          y[a] = g.wrap(a, static_cast<long>(x[a]) + static_cast<long>(step) * vs.e(j)[a]);
        const double moved = state.at(g.linear(y), j);
        const double orig = initial[n * 9 + j];
        if (std::memcmp(&moved, &orig, sizeof(double)) != 0)
          ++bad;
      }
    }
  }
  const bool back = state.data() == initial;
  return {bad == 0 && back, fmt("%.0f mismatches over 64 steps, identity after 64: ",
                                static_cast<double>(bad)) +
                                (back ? "yes" : "no")};
}

Outcome conservation() {
  SchemeSetup setup;
  setup.rates = {1.2, 1.5, 1.9, 1.2, 1.5, 1.9};
  Scheme scheme = setup.build(1.0 / 64);
  const GridShape g({64, 64});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ConservedState> w(g.node_count());
  for (auto& v : w)
    v = ConservedState{1.0 + 0.05 * u(rng), {0.03 + 0.02 * u(rng), -0.02 + 0.02 * u(rng)}};
  SchemeState state = scheme.equilibrium_state(g, [&](const NodeIndex& i) { return w[g.linear(i)]; });
  const auto t0 = conserved_totals(state, scheme.moments());
  scheme.run(state, 1000);
  const auto t1 = conserved_totals(state, scheme.moments());
  const double mass = std::abs(t1.mass - t0.mass) / t0.mass;
  // Momentum drift relative to the momentum scale M lambda of the run.
  const double scale = t0.mass * scheme.params().lambda();
  const double mom = std::max(std::abs(t1.momentum[0] - t0.momentum[0]),
                              std::abs(t1.momentum[1] - t0.momentum[1])) / scale;
  return {mass <= 1e-12 && mom <= 1e-12,
          fmt("mass drift %.2e, momentum drift %.2e (relative)", mass, mom)};
}

Outcome slope_in(const RefinementStudy& st, double lo, double hi) {
  return {st.passed && st.fit.slope >= lo && st.fit.slope <= hi && st.fit.r2 >= 0.99,
          st.experiment + fmt(" slope %.3f, R^2 %.5f", st.fit.slope, st.fit.r2) +
              (st.note.empty() ? "" : " (" + st.note + ")")};
}

Outcome viscosity_relation() {
  const ShearWaveConfig base = shear_wave_viscometer();
  bool ok = true;
  std::string detail;
  for (double s : {1.2, 1.5, 1.8}) {
    ShearWaveConfig c = base;
    c.s_shear = s;
    const ViscosityMeasurement m = measure_viscosity(c, 64);
    ok = ok && m.relative_error <= 0.02;
    detail += fmt("s=%.1f err %.2e; ", s, m.relative_error);
  }
  ShearWaveConfig c = base;
  c.s_shear = 2.0;
  const ViscosityMeasurement m = measure_viscosity(c, 64);
  ok = ok && m.nu_measured < m.nu_floor;
  detail += fmt("s=2 nu %.2e < floor %.2e", m.nu_measured, m.nu_floor);
  return {ok, detail};
}

Outcome algebraic_invariants() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rho(0.5, 2.0), u(-1.0, 1.0);
  double worst_inv = 0.0, worst_lambda = 0.0, worst_eq = 0.0, worst_jac = 0.0;
  for (const char* name : {"D1Q3", "D2Q9"}) {
    const auto vs = VelocitySet::builtin(name);
    const auto mm = build_moment_matrix(vs, 1.0);
    const auto model = EquilibriumModel::builtin(EquilibriumModel::default_kind(vs), vs, 1.0);
    const int q = vs.size(), d = vs.dim();
    const RowMatrix p = mm.matrix() * mm.inverse();
    const RowMatrix p2 = mm.inverse() * mm.matrix();
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        worst_inv = std::max(worst_inv, std::abs(p(i, j) - (i == j)));
        worst_inv = std::max(worst_inv, std::abs(p2(i, j) - (i == j)));
      }
    const auto lt = lambda_tensor(mm, vs);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int j = 0; j < q; ++j) {
          double sum = 0.0;
          for (int k = 0; k < q; ++k)
            sum += lt(a, b, k) * mm(k, j);
          worst_lambda =
              std::max(worst_lambda, std::abs(sum - mm.velocity(j, a) * mm.velocity(j, b)));
        }
    for (int t = 0; t < 1000; ++t) {
      ConservedState w{rho(rng), {0.0, 0.0}};
      for (int a = 0; a < d; ++a)
        w.q[a] = w.rho * 0.07 * u(rng);
      const auto f = equilibrium_distribution(model, w);
      double mass = 0.0, mom[2] = {0.0, 0.0};
      for (int j = 0; j < q; ++j) {
        mass += f[j];
        for (int a = 0; a < d; ++a)
          mom[a] += mm.velocity(j, a) * f[j];
      }
      worst_eq = std::max(worst_eq, std::abs(mass - w.rho) / w.rho);
      for (int a = 0; a < d; ++a)
        worst_eq = std::max(worst_eq, std::abs(mom[a] - w.q[a]) / w.rho);
      if (t % 50 != 0)
        continue;
      const RowMatrix jac = equilibrium_jacobian(model, w);
      const double h = 1e-6 * std::max(1.0, w.rho);
      for (int i = 0; i <= d; ++i) {
        ConservedState wp = w, wm = w;
        wp[i] += h;
        wm[i] -= h;
        const auto fp = equilibrium_distribution(model, wp);
        const auto fm = equilibrium_distribution(model, wm);
        for (int j = 0; j < q; ++j) {
          const double fd = (fp[j] - fm[j]) / (2 * h);
          worst_jac = std::max(worst_jac,
                               std::abs(fd - jac(j, i)) / std::max(1.0, std::abs(jac(j, i))));
        }
      }
    }
  }
  const bool ok = worst_inv <= 1e-12 && worst_lambda <= 1e-12 && worst_eq <= 1e-12 &&
                  worst_jac <= 1e-6;
  return {ok, fmt("M M^-1 %.1e, Lambda %.1e, constraints %.1e", worst_inv, worst_lambda,
                  worst_eq) +
                  fmt(", Jacobian %.1e", worst_jac)};
}

} // namespace

int main() {
  criterion(1, "relaxation = Euler ODE step", 1.0, relaxation_identity);
  criterion(2, "streaming is an exact permutation", 1.0, streaming_exactness);
  criterion(3, "mass and momentum conservation", 10.0, conservation);

  const StudySetup setup = shear_wave_preset();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<RefinementStudy> studies;
  std::string failure;
  try {
    studies = run_order_studies(setup, measure_all(setup));
  } catch (const std::exception& e) {
    failure = e.what();
  }
  const double shared = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto study = [&](const char* name) -> const RefinementStudy& {
    for (const auto& st : studies)
      if (st.experiment == name)
        return st;
    throw std::runtime_error("study did not run: " + failure);
  };

  criterion(4, "m - m_eq is first order", 120.0, [&] { return slope_in(study("prop3"), 0.8, 1.2); },
            shared);
  criterion(5, "technical lemma is second order", 180.0, [&] {
    const auto& p5 = study("prop5");
    Outcome o = slope_in(p5, 1.75, 2.25);
    const double control = p5.control_slope.value_or(NAN);
    o.ok = o.ok && control < 1.3;
    o.detail += fmt("; control slope %.3f", control);
    return o;
  }, shared);
  criterion(6, "Euler O(dt), Navier-Stokes O(dt^2)", 300.0, [&] {
    const Outcome a = slope_in(study("prop4"), 0.8, 1.2);
    const Outcome b = slope_in(study("prop6"), 1.75, 2.25);
    const Outcome c = slope_in(study("prop6-mass"), 1.75, 2.25);
    return Outcome{a.ok && b.ok && c.ok, a.detail + "; " + b.detail + "; " + c.detail};
  }, shared);
  criterion(7, "shear viscosity relation", 120.0, viscosity_relation);
  criterion(8, "algebraic invariants D1Q3 / D2Q9", 5.0, algebraic_invariants);

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
