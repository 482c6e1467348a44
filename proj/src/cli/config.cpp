#include "lbmeq/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace lbmeq::cli {

namespace {

std::string located(const std::string& message, int line, int column) {
  if (line <= 0)
    return "config: " + message;
  return "config:" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark m = node.Mark();
  if (m.is_null())
    throw ConfigError(message);
  throw ConfigError(message, m.line + 1, m.column + 1);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar())
    fail(node, key + ": expected a single value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, key + ": cannot read '" + node.Scalar() + "'");
  }
}

template <class T>
std::vector<T> sequence(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence())
    fail(node, key + ": expected a list");
  std::vector<T> out;
  for (const auto& item : node)
    out.push_back(scalar<T>(item, key));
  return out;
}

template <class T>
std::vector<std::vector<T>> table(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence())
    fail(node, key + ": expected a list of lists");
  std::vector<std::vector<T>> out;
  for (const auto& row : node)
    out.push_back(sequence<T>(row, key));
  return out;
}

void check_keys(const YAML::Node& map, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!map.IsMap())
    fail(map, section + ": expected a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.Scalar();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(kv.first, "unknown key '" + (section.empty() ? key : section + "." + key) + "'");
  }
}

int component_index(const YAML::Node& node) {
  const std::string c = scalar<std::string>(node, "initial.modes.component");
  if (c == "rho")
    return 0;
  if (c == "qx")
    return 1;
  if (c == "qy")
    return 2;
  fail(node, "initial.modes.component: '" + c + "' is not one of rho, qx, qy");
}

const char* component_name(int c) {
  static const char* names[] = {"rho", "qx", "qy"};
  return names[c];
}

int lattice_dim(const RunConfig& c) {
  if (c.velocities == "custom")
    return c.custom_dim;
  return c.velocities == "D1Q3" ? 1 : 2;
}

int lattice_size(const RunConfig& c) {
  if (c.velocities == "custom")
    return static_cast<int>(c.custom_vectors.size());
  return c.velocities == "D1Q3" ? 3 : 9;
}

void parse_lattice(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "lattice", {"velocities", "dim", "vectors", "higher_rows"});
  if (n["velocities"])
    c.velocities = scalar<std::string>(n["velocities"], "lattice.velocities");
  if (c.velocities != "D2Q9" && c.velocities != "D1Q3" && c.velocities != "custom")
    fail(n["velocities"], "lattice.velocities: '" + c.velocities +
                              "' is not one of D2Q9, D1Q3, custom");
  if (c.velocities == "custom") {
    if (!n["dim"] || !n["vectors"])
      fail(n, "lattice: a custom velocity set needs 'dim' and 'vectors'");
    c.custom_dim = scalar<int>(n["dim"], "lattice.dim");
    c.custom_vectors = table<int>(n["vectors"], "lattice.vectors");
  } else if (n["dim"] || n["vectors"]) {
    fail(n["dim"] ? n["dim"] : n["vectors"],
         "lattice: 'dim' and 'vectors' only apply to velocities: custom");
  }
  if (n["higher_rows"])
    c.higher_rows = table<double>(n["higher_rows"], "lattice.higher_rows");
}

void parse_equilibrium(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "equilibrium", {"kind", "cs2", "weights", "coefficients"});
  if (n["kind"])
    c.equilibrium_kind = scalar<std::string>(n["kind"], "equilibrium.kind");
  if (n["cs2"])
    c.cs2 = scalar<double>(n["cs2"], "equilibrium.cs2");
  if (n["weights"])
    c.weights = sequence<double>(n["weights"], "equilibrium.weights");
  if (n["coefficients"]) {
    const auto v = sequence<double>(n["coefficients"], "equilibrium.coefficients");
    if (v.size() != 4)
      fail(n["coefficients"], "equilibrium.coefficients: expected 4 values");
    c.coefficients = {v[0], v[1], v[2], v[3]};
  }
}

void parse_scheme(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "scheme", {"lambda", "dt", "relaxation", "steps"});
  if (n["lambda"])
    c.lambda = scalar<double>(n["lambda"], "scheme.lambda");
  if (n["dt"])
    c.dt = scalar<double>(n["dt"], "scheme.dt");
  if (n["relaxation"]) {
    const YAML::Node r = n["relaxation"];
    c.relaxation = r.IsScalar() ? std::vector<double>{scalar<double>(r, "scheme.relaxation")}
                                : sequence<double>(r, "scheme.relaxation");
  }
  if (n["steps"])
    c.steps = scalar<long>(n["steps"], "scheme.steps");
}

void parse_grid(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "grid", {"shape", "length"});
  if (n["shape"])
    c.shape = sequence<int>(n["shape"], "grid.shape");
  if (n["length"])
    c.length = scalar<double>(n["length"], "grid.length");
}

void parse_initial(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "initial", {"rho", "qx", "qy", "modes"});
  // Giving any part of the field replaces the preset entirely.
  c.initial = InitialField{};
  if (n["rho"])
    c.initial.base.rho = scalar<double>(n["rho"], "initial.rho");
  if (n["qx"])
    c.initial.base.q[0] = scalar<double>(n["qx"], "initial.qx");
  if (n["qy"])
    c.initial.base.q[1] = scalar<double>(n["qy"], "initial.qy");
  if (!n["modes"])
    return;
  const YAML::Node modes = n["modes"];
  if (!modes.IsSequence())
    fail(modes, "initial.modes: expected a list");
  for (const auto& m : modes) {
    check_keys(m, "initial.modes", {"component", "amplitude", "wavenumber", "phase"});
    if (!m["component"] || !m["amplitude"] || !m["wavenumber"])
      fail(m, "initial.modes: each mode needs component, amplitude and wavenumber");
    FourierMode mode;
    mode.component = component_index(m["component"]);
    mode.amplitude = scalar<double>(m["amplitude"], "initial.modes.amplitude");
    const auto k = sequence<int>(m["wavenumber"], "initial.modes.wavenumber");
    if (k.empty() || k.size() > static_cast<std::size_t>(kMaxDim))
      fail(m["wavenumber"], "initial.modes.wavenumber: expected 1 or 2 integers");
    std::copy(k.begin(), k.end(), mode.mode.begin());
    if (m["phase"])
      mode.phase = scalar<double>(m["phase"], "initial.modes.phase");
    c.initial.modes.push_back(mode);
  }
}

void parse_study(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "study", {"resolutions", "horizon", "viscosity"});
  if (n["resolutions"])
    c.resolutions = sequence<int>(n["resolutions"], "study.resolutions");
  if (n["horizon"])
    c.horizon = scalar<double>(n["horizon"], "study.horizon");
  if (const YAML::Node v = n["viscosity"]) {
    check_keys(v, "study.viscosity",
               {"rates", "resolution", "resolutions", "mode", "amplitude", "decay_times"});
    auto& vc = c.viscosity;
    if (v["rates"])
      vc.rates = sequence<double>(v["rates"], "study.viscosity.rates");
    if (v["resolution"])
      vc.resolution = scalar<int>(v["resolution"], "study.viscosity.resolution");
    if (v["resolutions"])
      vc.resolutions = sequence<int>(v["resolutions"], "study.viscosity.resolutions");
    if (v["mode"])
      vc.mode = scalar<int>(v["mode"], "study.viscosity.mode");
    if (v["amplitude"])
      vc.amplitude = scalar<double>(v["amplitude"], "study.viscosity.amplitude");
    if (v["decay_times"])
      vc.decay_times = scalar<double>(v["decay_times"], "study.viscosity.decay_times");
  }
}

// Cross-field consistency; range checks on physics parameters are left to
// the constructors so that they surface as construction errors.
void validate(const YAML::Node& root, const RunConfig& c) {
  const int d = lattice_dim(c);
  if (d < 1 || d > kMaxDim)
    fail(root["lattice"], "lattice.dim: must be 1 or 2");
  if (static_cast<int>(c.shape.size()) != d)
    fail(root["grid"] ? root["grid"] : root,
         "grid.shape: has " + std::to_string(c.shape.size()) + " axes but the lattice is " +
             std::to_string(d) + "-dimensional");
  for (int n : c.shape)
    if (n < 1)
      fail(root["grid"], "grid.shape: extents must be positive");
  if (!(c.length > 0.0))
    fail(root["grid"], "grid.length: must be positive");
  const int nonconserved = lattice_size(c) - d - 1;
  const auto nr = static_cast<int>(c.relaxation.size());
  if (nr != 1 && nr != nonconserved)
    fail(root["scheme"] ? root["scheme"] : root,
         "scheme.relaxation: expected 1 or " + std::to_string(nonconserved) + " values, got " +
             std::to_string(nr));
  if (c.steps < 0)
    fail(root["scheme"], "scheme.steps: must be >= 0");
  if (c.lambda && !(*c.lambda > 0.0))
    fail(root["scheme"], "scheme.lambda: must be positive");
  if (c.dt && !(*c.dt > 0.0))
    fail(root["scheme"], "scheme.dt: must be positive");
  if (c.lambda && c.dt) {
    const double dx = c.length / c.shape[0];
    if (std::abs(*c.lambda * *c.dt - dx) > 1e-12 * dx)
      fail(root["scheme"], "scheme: lambda * dt must equal dx = grid.length / grid.shape[0]");
  }
  for (const auto& m : c.initial.modes)
    if (m.component > d)
      fail(root["initial"], std::string("initial.modes.component: ") + component_name(m.component) +
                                " does not exist in " + std::to_string(d) + " dimensions");
}

} // namespace

ConfigError::ConfigError(const std::string& message, int line, int column)
    : Error(located(message, line, column)), line_(line), column_(column) {}

RunConfig::RunConfig() { initial = shear_wave_preset().initial; }

double RunConfig::dx() const { return length / shape.at(0); }

double RunConfig::effective_lambda() const {
  if (lambda)
    return *lambda;
  if (dt)
    return dx() / *dt;
  return 1.0;
}

double RunConfig::effective_dt() const { return dt ? *dt : dx() / effective_lambda(); }

SchemeSetup RunConfig::scheme_setup() const {
  SchemeSetup s;
  if (velocities == "custom")
    s.velocities = VelocitySet::custom(custom_dim, custom_vectors);
  else
    s.velocities = VelocitySet::builtin(velocities);
  if (higher_rows) {
    const auto& rows = *higher_rows;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw ConfigError("lattice.higher_rows: rows differ in length");
      for (std::size_t j = 0; j < cols; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    s.higher_rows = std::move(m);
  }
  s.equilibrium_kind = equilibrium_kind;
  s.cs2 = cs2;
  s.weights = weights;
  s.coefficients = coefficients;
  s.lambda = effective_lambda();
  const int nonconserved = s.velocities.size() - s.velocities.dim() - 1;
  s.rates = relaxation.size() == 1 ? std::vector<double>(nonconserved, relaxation.front())
                                   : relaxation;
  return s;
}

StudySetup RunConfig::study_setup() const {
  StudySetup s;
  s.scheme = scheme_setup();
  s.length = length;
  s.initial = initial;
  s.horizon = horizon;
  s.resolutions = resolutions;
  return s;
}

ShearWaveConfig RunConfig::shear_wave() const {
  ShearWaveConfig s;
  s.scheme = scheme_setup();
  s.length = length;
  s.mode = viscosity.mode;
  s.amplitude = viscosity.amplitude;
  s.decay_times = viscosity.decay_times;
  if (!viscosity.rates.empty())
    s.s_shear = viscosity.rates.front();
  return s;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  RunConfig c;
  if (root.IsNull())
    return c;
  check_keys(root, "", {"lattice", "equilibrium", "scheme", "grid", "initial", "study"});
  if (root["lattice"])
    parse_lattice(root["lattice"], c);
  // Defaults that depend on the lattice; the sections below override them.
  if (c.velocities != "D2Q9") {
    c.relaxation = {1.2};
    c.shape = std::vector<int>(std::clamp(lattice_dim(c), 1, kMaxDim), 64);
    if (lattice_dim(c) == 1)
      c.initial = InitialField{ConservedState{1.0, {0.0, 0.0}}, {FourierMode{0, 1e-3, {1, 0}, 0.0}}};
  }
  if (root["equilibrium"])
    parse_equilibrium(root["equilibrium"], c);
  if (root["scheme"])
    parse_scheme(root["scheme"], c);
  if (root["grid"])
    parse_grid(root["grid"], c);
  if (root["initial"])
    parse_initial(root["initial"], c);
  if (root["study"])
    parse_study(root["study"], c);
  validate(root, c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "lattice" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "velocities" << YAML::Value << c.velocities;
  if (c.velocities == "custom") {
    out << YAML::Key << "dim" << YAML::Value << c.custom_dim;
    out << YAML::Key << "vectors" << YAML::Value << YAML::BeginSeq;
    for (const auto& v : c.custom_vectors)
      out << YAML::Flow << v;
    out << YAML::EndSeq;
  }
  if (c.higher_rows) {
    out << YAML::Key << "higher_rows" << YAML::Value << YAML::BeginSeq;
    for (const auto& r : *c.higher_rows)
      out << YAML::Flow << r;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "equilibrium" << YAML::Value << YAML::BeginMap;
  if (!c.equilibrium_kind.empty())
    out << YAML::Key << "kind" << YAML::Value << c.equilibrium_kind;
  if (c.cs2)
    out << YAML::Key << "cs2" << YAML::Value << *c.cs2;
  if (!c.weights.empty())
    out << YAML::Key << "weights" << YAML::Value << YAML::Flow << c.weights;
  const auto& k = c.coefficients;
  out << YAML::Key << "coefficients" << YAML::Value << YAML::Flow
      << std::vector<double>{k.constant, k.linear, k.quadratic, k.isotropic};
  out << YAML::EndMap;

  out << YAML::Key << "scheme" << YAML::Value << YAML::BeginMap;
  if (c.lambda)
    out << YAML::Key << "lambda" << YAML::Value << *c.lambda;
  if (c.dt)
    out << YAML::Key << "dt" << YAML::Value << *c.dt;
  out << YAML::Key << "relaxation" << YAML::Value << YAML::Flow << c.relaxation;
  out << YAML::Key << "steps" << YAML::Value << c.steps;
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "shape" << YAML::Value << YAML::Flow << c.shape;
  out << YAML::Key << "length" << YAML::Value << c.length;
  out << YAML::EndMap;

  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rho" << YAML::Value << c.initial.base.rho;
  out << YAML::Key << "qx" << YAML::Value << c.initial.base.q[0];
  out << YAML::Key << "qy" << YAML::Value << c.initial.base.q[1];
  out << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : c.initial.modes) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "component" << YAML::Value << component_name(m.component);
    out << YAML::Key << "amplitude" << YAML::Value << m.amplitude;
    out << YAML::Key << "wavenumber" << YAML::Value << YAML::Flow
        << std::vector<int>(m.mode.begin(), m.mode.end());
    out << YAML::Key << "phase" << YAML::Value << m.phase;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "study" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "resolutions" << YAML::Value << YAML::Flow << c.resolutions;
  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "viscosity" << YAML::Value << YAML::BeginMap;
  const auto& v = c.viscosity;
  out << YAML::Key << "rates" << YAML::Value << YAML::Flow << v.rates;
  out << YAML::Key << "resolution" << YAML::Value << v.resolution;
  out << YAML::Key << "resolutions" << YAML::Value << YAML::Flow << v.resolutions;
  out << YAML::Key << "mode" << YAML::Value << v.mode;
  out << YAML::Key << "amplitude" << YAML::Value << v.amplitude;
  out << YAML::Key << "decay_times" << YAML::Value << v.decay_times;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

} // namespace lbmeq::cli
