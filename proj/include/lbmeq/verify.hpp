#ifndef LBMEQ_VERIFY_HPP_
#define LBMEQ_VERIFY_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbmeq/error.hpp"
#include "lbmeq/initial_field.hpp"
#include "lbmeq/setup.hpp"

namespace lbmeq {

// Malformed study configuration (too few resolutions, horizon too short...).
class InvalidStudy : public Error {
public:
  using Error::Error;
};

// Least-squares line through (log x, log y).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Throws FitRejected for fewer than two points or non-positive data.
LogLogFit fit_log_log(std::span<const double> x, std::span<const double> y);

// Acoustic-scaling refinement experiment: dx = L / N, dt = dx / lambda,
// initialised at equilibrium with a smooth field and measured at a fixed
// physical time.
struct StudySetup {
  SchemeSetup scheme;
  double length = 1.0;
  InitialField initial;
  double horizon = 1.0;
  std::vector<int> resolutions{32, 64, 128, 256};
};

// Default experiment: D2Q9, lambda = 1, L = 1, a transverse shear wave
// q_y = 1e-3 sin(2 pi x) plus a density wave rho = 1 + 1e-3 sin(2 pi y) carried
// by a uniform flow q_y = 0.05, measured at T = 1. Without the mean flow the
// linear part of the mass residual cancels at second order.
StudySetup shear_wave_preset();

// Checks >= 4 resolutions, each doubling the previous, and that the
// coarsest run reaches T in at least 20 steps. Throws InvalidStudy.
void validate_study(const StudySetup& setup);

// All residual norms (discrete max norms) of one resolution.
struct ResolutionResult {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  long steps = 0;
  // max_{x, k > d} |m^k - m^k_eq|
  double prop3 = 0.0;
  // max_{x, k > d} |m^k - (m^k_eq - dt/s_k theta^k)|
  double prop5 = 0.0;
  // max_{x, alpha} |d_t q^alpha + d_beta F^{alpha beta}|
  double prop4 = 0.0;
  // same with the second-order corrected flux
  double prop6 = 0.0;
  // max_x |d_t rho + d_beta q^beta|
  double mass = 0.0;
  double mass_drift = 0.0;
};

// Runs one resolution; throws SimulationDiverged on blow-up.
ResolutionResult measure_resolution(const StudySetup& setup, int n);

double residual_prop3(const StudySetup& setup, int n);
double residual_prop4(const StudySetup& setup, int n);
double residual_prop5(const StudySetup& setup, int n);
double residual_prop6(const StudySetup& setup, int n);

struct StudyRow {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  double residual = 0.0;
  std::optional<double> slope_running;
};

struct RefinementStudy {
  std::string experiment;
  std::vector<StudyRow> rows;
  LogLogFit fit;
  bool fit_accepted = false; // R^2 >= 0.99 and residuals strictly decreasing
  double slope_min = 0.0;
  double slope_max = 0.0;
  // Slope of the series a residual is compared against (prop5 only).
  std::optional<double> control_slope;
  bool passed = false;
  std::string note;
};

// Fits residual against dt and grades the slope against [slope_min, slope_max].
RefinementStudy grade_study(std::string experiment, std::vector<StudyRow> rows, double slope_min,
                            double slope_max);

// CSV columns N,dx,dt,residual,slope_running.
void write_study_csv(std::ostream& out, const RefinementStudy& study);
// "experiment,fitted_slope,r2,pass|fail"
std::string summary_line(const RefinementStudy& study);

// prop3, prop4, prop5, prop6, prop6-mass from one set of runs. prop5 only
// passes when its control series (the prop3 residual) has slope below 1.3.
std::vector<RefinementStudy> run_order_studies(const StudySetup& setup,
                                               const std::vector<ResolutionResult>& results);
std::vector<ResolutionResult> measure_all(const StudySetup& setup);

// Transverse shear wave u_y = amplitude sin(2 pi mode x / L) on an N x 1 strip.
struct ShearWaveConfig {
  SchemeSetup scheme; // both stress moments take s_shear
  double length = 1.0;
  int mode = 1;
  double amplitude = 1e-3;
  double s_shear = 1.2;
  double decay_times = 1.5;
};

ShearWaveConfig shear_wave_viscometer();

struct ViscosityMeasurement {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  double wavenumber = 0.0;
  double s_shear = 0.0;
  long steps = 0;
  double nu_measured = 0.0;
  double nu_predicted = 0.0;
  // cs^2 dt (k dx)^2: size of the first neglected term of the expansion.
  double nu_floor = 0.0;
  double relative_error = 0.0;
  double r2 = 0.0;
  bool ill_conditioned = false; // s_shear >= 1.95
  bool below_floor = false;
  std::string warning;
};

// Runs the shear wave for `decay_times` predicted decay times (or floor
// decay times when the prediction is below the floor), fits ln amplitude
// against t and returns nu = -slope / k^2. Throws FitRejected when the decay
// is not monotone.
ViscosityMeasurement measure_viscosity(const ShearWaveConfig& cfg, int n);

struct ViscosityStudy {
  std::vector<ViscosityMeasurement> sweep; // at the reference resolution
  RefinementStudy refinement;              // nu_measured against dt
  bool passed = false;
};

// Sweep over `rates` at `reference_n` (2% agreement, or below the floor for
// s >= 1.95) plus a refinement of the first rate over `resolutions`.
ViscosityStudy run_viscosity_study(const ShearWaveConfig& base, const std::vector<double>& rates,
                                   int reference_n, const std::vector<int>& resolutions);

} // namespace lbmeq

#endif // LBMEQ_VERIFY_HPP_
