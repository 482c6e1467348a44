#include "lbmeq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lbmeq/analysis.hpp"

namespace lbmeq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
    throw FitRejected("abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

} // namespace

LogLogFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw FitRejected("fit abscissae and ordinates differ in length");
  if (x.size() < 2)
    throw FitRejected("a log-log fit needs at least two points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw FitRejected("log-log fit needs positive finite data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const LineFit f = fit_line(lx, ly);
  return {f.slope, f.intercept, f.r2};
}

StudySetup shear_wave_preset() {
  StudySetup s;
  s.scheme.velocities = VelocitySet::builtin("D2Q9");
  s.scheme.lambda = 1.0;
  s.scheme.rates = {1.2, 1.1, 1.3, 1.3, 1.5, 1.5};
  s.length = 1.0;
  s.initial.base = ConservedState{1.0, {0.0, 0.05}};
  s.initial.modes = {
      FourierMode{2, 1e-3, {1, 0}, 0.0},
      FourierMode{0, 1e-3, {0, 1}, 0.0},
  };
  s.horizon = 1.0;
  s.resolutions = {32, 64, 128, 256};
  return s;
}

void validate_study(const StudySetup& setup) {
  const auto& r = setup.resolutions;
  if (r.size() < 4)
    throw InvalidStudy("a refinement study needs at least 4 resolutions, got " +
                       std::to_string(r.size()));
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i] != 2 * r[i - 1])
      throw InvalidStudy("resolutions must double: " + std::to_string(r[i - 1]) + " then " +
                         std::to_string(r[i]));
  if (r.front() < 8)
    throw InvalidStudy("coarsest resolution must have at least 8 nodes per axis");
  if (!(setup.length > 0.0) || !(setup.scheme.lambda > 0.0) || !(setup.horizon > 0.0))
    throw InvalidStudy("length, lambda and horizon must be positive");
  const double dt = setup.length / r.front() / setup.scheme.lambda;
  const double steps = setup.horizon / dt;
  if (steps < 20.0 - 1e-9)
    throw InvalidStudy("horizon " + format_double(setup.horizon) + " is only " +
                       format_double(steps) + " steps at N = " + std::to_string(r.front()) +
                       "; at least 20 are required");
  if (setup.initial.min_density_bound() <= 0.0)
    throw InvalidStudy("initial density is not bounded away from zero");
}

ResolutionResult measure_resolution(const StudySetup& setup, int n) {
  const double dx = setup.length / n;
  Scheme scheme = setup.scheme.build(dx);
  const SchemeParams& params = scheme.params();
  const MomentMatrix& mm = scheme.moments();
  const EquilibriumModel& model = scheme.model();
  const int d = setup.scheme.velocities.dim();
  const int q = mm.size();
  const int c = d + 1;
  const double dt = params.dt();

  ResolutionResult res;
  res.n = n;
  res.dx = dx;
  res.dt = dt;
  res.steps = std::lround(setup.horizon / dt);
  if (res.steps < 2)
    throw InvalidStudy("horizon shorter than two time steps");

  GridShape shape(std::vector<int>(d, n));
  const Point lengths = box_lengths(shape, dx);
  SchemeState state = scheme.equilibrium_state(shape, [&](const NodeIndex& node) {
    return setup.initial.value(node_position(node, dx), lengths);
  });
  const ConservedTotals before = conserved_totals(state, mm);

  scheme.run(state, res.steps - 1);
  const std::vector<ConservedState> w_minus = conserved_field(state, mm);
  scheme.run(state, 1);
  const std::vector<double> m = moments_of(state, mm);
  const std::vector<ConservedState> w_now = conserved_field(state, mm);
  scheme.run(state, 1);
  const std::vector<ConservedState> w_plus = conserved_field(state, mm);
  const ConservedTotals after = conserved_totals(state, mm);
  res.mass_drift = std::abs(after.mass - before.mass) / std::abs(before.mass);

  const SmoothField field(shape, dx, w_now);
  const std::size_t nodes = field.node_count();

  const std::vector<double> m_eq = equilibrium_moment_field(field, model, mm);
  const std::vector<double> pred = technical_lemma_prediction(field, model, mm, params);
  for (std::size_t i = 0; i < nodes; ++i)
    for (int k = c; k < q; ++k) {
      const std::size_t at = i * q + k;
      res.prop3 = std::max(res.prop3, std::abs(m[at] - m_eq[at]));
      res.prop5 = std::max(res.prop5, std::abs(m[at] - pred[at]));
    }

  const std::vector<double> div = euler_flux_divergence(field, model);
  const DefectField defect = conservation_defect(field, model, mm);
  const std::vector<double> div2 =
      field.tensor_divergence(ns_flux_correction(field, defect, model, mm, params));
  for (std::size_t i = 0; i < nodes; ++i) {
    const double drho = (w_plus[i].rho - w_minus[i].rho) / (2.0 * dt);
    res.mass = std::max(res.mass, std::abs(drho + div[i * c]));
    for (int a = 0; a < d; ++a) {
      const double dq = (w_plus[i].q[a] - w_minus[i].q[a]) / (2.0 * dt);
      res.prop4 = std::max(res.prop4, std::abs(dq + div[i * c + 1 + a]));
      res.prop6 = std::max(res.prop6, std::abs(dq + div2[i * d + a]));
    }
  }
  return res;
}

double residual_prop3(const StudySetup& setup, int n) { return measure_resolution(setup, n).prop3; }
double residual_prop4(const StudySetup& setup, int n) { return measure_resolution(setup, n).prop4; }
double residual_prop5(const StudySetup& setup, int n) { return measure_resolution(setup, n).prop5; }
double residual_prop6(const StudySetup& setup, int n) { return measure_resolution(setup, n).prop6; }

std::vector<ResolutionResult> measure_all(const StudySetup& setup) {
  validate_study(setup);
  std::vector<ResolutionResult> out;
  out.reserve(setup.resolutions.size());
  for (int n : setup.resolutions)
    out.push_back(measure_resolution(setup, n));
  return out;
}

RefinementStudy grade_study(std::string experiment, std::vector<StudyRow> rows, double slope_min,
                            double slope_max) {
  RefinementStudy st;
  st.experiment = std::move(experiment);
  st.slope_min = slope_min;
  st.slope_max = slope_max;
  std::vector<double> dts, res;
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      const auto& a = rows[i - 1];
      const auto& b = rows[i];
      if (a.residual > 0.0 && b.residual > 0.0)
        rows[i].slope_running = std::log(b.residual / a.residual) / std::log(b.dt / a.dt);
      if (!(b.residual < a.residual))
        decreasing = false;
    }
    dts.push_back(rows[i].dt);
    res.push_back(rows[i].residual);
  }
  st.rows = std::move(rows);
  try {
    st.fit = fit_log_log(dts, res);
  } catch (const FitRejected& e) {
    st.note = e.what();
    st.fit.slope = std::numeric_limits<double>::quiet_NaN();
    st.fit.r2 = std::numeric_limits<double>::quiet_NaN();
    return st;
  }
  st.fit_accepted = decreasing && st.fit.r2 >= 0.99;
  if (!decreasing)
    st.note = "residuals do not decrease monotonically";
  else if (st.fit.r2 < 0.99)
    st.note = "R^2 below 0.99";
  st.passed = st.fit_accepted && st.fit.slope >= slope_min && st.fit.slope <= slope_max;
  if (st.fit_accepted && !st.passed)
    st.note = "slope outside [" + format_double(slope_min) + ", " + format_double(slope_max) + "]";
  return st;
}

void write_study_csv(std::ostream& out, const RefinementStudy& study) {
  out << "N,dx,dt,residual,slope_running\n";
  const auto old = out.precision(17);
  for (const auto& r : study.rows) {
    out << r.n << ',' << r.dx << ',' << r.dt << ',' << r.residual << ',';
    if (r.slope_running)
      out << *r.slope_running;
    out << '\n';
  }
  out.precision(old);
}

std::string summary_line(const RefinementStudy& study) {
  return study.experiment + ',' + format_double(study.fit.slope) + ',' +
         format_double(study.fit.r2) + ',' + (study.passed ? "pass" : "fail");
}

std::vector<RefinementStudy> run_order_studies(const StudySetup& setup,
                                               const std::vector<ResolutionResult>& results) {
  (void)setup;
  auto series = [&](double ResolutionResult::*field) {
    std::vector<StudyRow> rows;
    for (const auto& r : results)
      rows.push_back(StudyRow{r.n, r.dx, r.dt, r.*field, std::nullopt});
    return rows;
  };
  std::vector<RefinementStudy> out;
  out.push_back(grade_study("prop3", series(&ResolutionResult::prop3), 0.8, 1.2));
  out.push_back(grade_study("prop4", series(&ResolutionResult::prop4), 0.8, 1.2));
  RefinementStudy p5 = grade_study("prop5", series(&ResolutionResult::prop5), 1.75, 2.25);
  p5.control_slope = out[0].fit.slope;
  if (!(out[0].fit.slope < 1.3)) {
    p5.passed = false;
    p5.note = "control series slope " + format_double(out[0].fit.slope) + " is not below 1.3";
  }
  out.push_back(std::move(p5));
  out.push_back(grade_study("prop6", series(&ResolutionResult::prop6), 1.75, 2.25));
  out.push_back(grade_study("prop6-mass", series(&ResolutionResult::mass), 1.75, 2.25));
  return out;
}

ShearWaveConfig shear_wave_viscometer() {
  ShearWaveConfig cfg;
  cfg.scheme.velocities = VelocitySet::builtin("D2Q9");
  cfg.scheme.lambda = 1.0;
  cfg.scheme.rates = {1.2, 1.1, 1.3, 1.3, 1.5, 1.5};
  return cfg;
}

ViscosityMeasurement measure_viscosity(const ShearWaveConfig& cfg, int n) {
  if (n < 4)
    throw InvalidStudy("viscometry needs at least 4 nodes along the wave");
  if (cfg.mode < 1)
    throw InvalidStudy("shear-wave mode must be >= 1");
  if (!(cfg.amplitude > 0.0) || cfg.amplitude > 1e-3)
    throw InvalidStudy("shear-wave amplitude must lie in (0, 1e-3]");
  if (!(cfg.length > 0.0))
    throw InvalidStudy("shear-wave length must be positive");
  if (!(cfg.decay_times >= 1.0))
    throw InvalidStudy("the run must cover at least one decay time");
  if (!(cfg.s_shear > 0.0) || cfg.s_shear > 2.0)
    throw InvalidRelaxation("s_shear = " + format_double(cfg.s_shear) +
                            " violates the stability bound 0 < s <= 2");
  SchemeSetup setup = cfg.scheme;
  {
    const MomentMatrix probe = setup.moment_matrix();
    if (setup.velocities.name() != "D2Q9" || !probe.default_basis())
      throw InvalidStudy("viscometry needs D2Q9 with its default moment basis");
    const int shear = probe.off_diagonal_stress_row();
    setup.rates.at(shear - 3) = cfg.s_shear;
    setup.rates.at(shear - 4) = cfg.s_shear;
  }
  ViscosityMeasurement out;
  out.n = n;
  out.dx = cfg.length / n;
  out.s_shear = cfg.s_shear;
  out.wavenumber = kTwoPi * cfg.mode / cfg.length;
  Scheme scheme = setup.build(out.dx);
  out.dt = scheme.params().dt();
  const double cs2 = scheme.model().sound_speed_sq();
  const double k = out.wavenumber;
  out.nu_predicted = cs2 * out.dt * (1.0 / cfg.s_shear - 0.5);
  out.nu_floor = cs2 * out.dt * (k * out.dx) * (k * out.dx);
  out.ill_conditioned = cfg.s_shear >= 1.95;
  if (out.ill_conditioned)
    out.warning = "s_shear = " + format_double(cfg.s_shear) +
                  " is close to 2: the predicted viscosity is below the resolution floor";

  const double nu_h = std::max(out.nu_predicted, out.nu_floor);
  const double horizon = cfg.decay_times / (nu_h * k * k);
  out.steps = static_cast<long>(std::ceil(horizon / out.dt));

  GridShape shape({n, 1});
  SchemeState state = scheme.equilibrium_state(shape, [&](const NodeIndex& node) {
    const double x = node[0] * out.dx;
    return ConservedState{1.0, {0.0, cfg.amplitude * std::sin(k * x)}};
  });
  std::vector<double> basis(n);
  for (int i = 0; i < n; ++i)
    basis[i] = std::sin(k * i * out.dx);
  const MomentMatrix& mm = scheme.moments();
  auto amplitude = [&] {
    const auto w = conserved_field(state, mm);
    double a = 0.0;
    for (int i = 0; i < n; ++i)
      a += w[i].q[1] * basis[i];
    return 2.0 * a / n;
  };

  const long first = static_cast<long>(std::ceil(0.1 * out.steps));
  const double a0 = amplitude();
  std::vector<double> ts, ls;
  double prev = a0;
  for (long s = 1; s <= out.steps; ++s) {
    scheme.run(state, 1);
    const double a = amplitude();
    if (s < first)
      continue;
    if (!out.ill_conditioned) {
      if (a > prev + 1e-6 * a0 && s > first)
        throw FitRejected("shear-wave amplitude grew at step " + std::to_string(s));
      if (!(a > 0.0))
        throw FitRejected("shear-wave amplitude changed sign at step " + std::to_string(s));
    }
    prev = a;
    if (a > 0.0) {
      ts.push_back(s * out.dt);
      ls.push_back(std::log(a));
    }
  }
  if (ts.size() < 2)
    throw FitRejected("too few positive amplitude samples to fit");
  const LineFit f = fit_line(ts, ls);
  out.nu_measured = -f.slope / (k * k);
  out.r2 = f.r2;
  out.relative_error = out.nu_predicted > 0.0
                           ? std::abs(out.nu_measured - out.nu_predicted) / out.nu_predicted
                           : std::numeric_limits<double>::infinity();
  out.below_floor = out.nu_measured < out.nu_floor;
  return out;
}

ViscosityStudy run_viscosity_study(const ShearWaveConfig& base, const std::vector<double>& rates,
                                   int reference_n, const std::vector<int>& resolutions) {
  ViscosityStudy st;
  st.passed = true;
  for (double s : rates) {
    ShearWaveConfig cfg = base;
    cfg.s_shear = s;
    ViscosityMeasurement m = measure_viscosity(cfg, reference_n);
    const bool ok = m.ill_conditioned ? m.below_floor : m.relative_error <= 0.02;
    st.passed = st.passed && ok;
    st.sweep.push_back(std::move(m));
  }
  std::vector<StudyRow> rows;
  ShearWaveConfig cfg = base;
  if (!rates.empty())
    cfg.s_shear = rates.front();
  for (int n : resolutions) {
    const ViscosityMeasurement m = measure_viscosity(cfg, n);
    rows.push_back(StudyRow{n, m.dx, m.dt, m.nu_measured, std::nullopt});
  }
  st.refinement = grade_study("viscosity", std::move(rows), 0.8, 1.2);
  st.passed = st.passed && st.refinement.passed;
  return st;
}

} // namespace lbmeq
