#ifndef LBMEQ_CLI_CONFIG_HPP_
#define LBMEQ_CLI_CONFIG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lbmeq/error.hpp"
#include "lbmeq/initial_field.hpp"
#include "lbmeq/setup.hpp"
#include "lbmeq/verify.hpp"

namespace lbmeq::cli {

// Parse or validation failure. line/column are 1-based, 0 when unknown.
class ConfigError : public Error {
public:
  ConfigError(const std::string& message, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

struct ViscosityConfig {
  std::vector<double> rates{1.2, 1.5, 1.8, 2.0};
  int resolution = 64;
  std::vector<int> resolutions{32, 64, 128, 256};
  int mode = 1;
  double amplitude = 1e-3;
  double decay_times = 1.5;
  bool operator==(const ViscosityConfig&) const = default;
};

// Everything a command needs. Defaults reproduce the shear-wave study preset,
// so an empty file is a valid configuration.
struct RunConfig {
  // [lattice]
  std::string velocities = "D2Q9"; // built-in name or "custom"
  int custom_dim = 0;
  std::vector<std::vector<int>> custom_vectors;
  std::optional<std::vector<std::vector<double>>> higher_rows;
  // [equilibrium]
  std::string equilibrium_kind; // empty: default for the lattice
  std::optional<double> cs2;
  std::vector<double> weights;
  PolynomialCoefficients coefficients;
  // [scheme]
  std::optional<double> lambda;
  std::optional<double> dt;
  std::vector<double> relaxation{1.2, 1.1, 1.3, 1.3, 1.5, 1.5};
  long steps = 0;
  // [grid]
  std::vector<int> shape{64, 64};
  double length = 1.0;
  // [initial]
  InitialField initial;
  // [study]
  std::vector<int> resolutions{32, 64, 128, 256};
  double horizon = 1.0;
  ViscosityConfig viscosity;

  RunConfig();
  bool operator==(const RunConfig&) const = default;

  double dx() const;
  // lambda from scheme.lambda, else dx / scheme.dt, else 1.
  double effective_lambda() const;
  double effective_dt() const;
  // Velocity set, basis, equilibrium and the relaxation list expanded to
  // one value per non-conserved moment.
  SchemeSetup scheme_setup() const;
  StudySetup study_setup() const;
  ShearWaveConfig shear_wave() const;
};

// Throws ConfigError (syntax, unknown key, wrong type, inconsistent values).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

} // namespace lbmeq::cli

#endif // LBMEQ_CLI_CONFIG_HPP_
