#include "lbmeq/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>

#include "lbmeq/analysis.hpp"
#include "lbmeq/checkpoint.hpp"
#include "lbmeq/verify.hpp"

namespace lbmeq::cli {

namespace {

std::ostream& out_of(const CommandOptions& o) { return o.out ? *o.out : std::cout; }
std::ostream& err_of(const CommandOptions& o) { return o.err ? *o.err : std::cerr; }

std::filesystem::path output_file(const CommandOptions& o, const std::string& name) {
  const std::filesystem::path dir(o.out_dir.empty() ? "." : o.out_dir);
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::ofstream open_output(const CommandOptions& o, const std::string& name,
                          std::ios::openmode mode = std::ios::out) {
  const auto path = output_file(o, name);
  std::ofstream f(path, mode);
  if (!f)
    throw std::runtime_error("cannot write " + path.string());
  return f;
}

int guarded(const CommandOptions& o, const std::function<int()>& body) {
  std::ostream& err = err_of(o);
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidStudy& e) {
    err << "error: invalid study: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConstruction;
  } catch (const SimulationDiverged& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const FitRejected& e) {
    err << "error: fit rejected: " << e.what() << '\n';
    return kExitVerification;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GridTooCoarse& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NonPositiveDensity& e) {
    err << "error: initial field: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

Scheme build_scheme(const RunConfig& c) {
  return c.scheme_setup().build(c.dx(), c.effective_dt());
}

int analyze(const RunConfig& c, const CommandOptions& o) {
  const Scheme scheme = build_scheme(c);
  const PdeReport report =
      pde_report(scheme.velocity_set(), scheme.moments(), scheme.model(), scheme.params());
  {
    auto f = open_output(o, "report.csv");
    write_report_csv(f, report);
  }
  {
    auto f = open_output(o, "report.json");
    write_report_json(f, report);
  }
  if (!o.quiet)
    write_report_summary(out_of(o), report);
  return kExitOk;
}

int run(const RunConfig& c, const CommandOptions& o) {
  Scheme scheme = build_scheme(c);
  const double dx = c.dx();
  const GridShape shape(c.shape);
  const Point lengths = box_lengths(shape, dx);
  SchemeState state = scheme.equilibrium_state(shape, [&](const NodeIndex& node) {
    return c.initial.value(node_position(node, dx), lengths);
  });
  const ConservedTotals before = conserved_totals(state, scheme.moments());
  scheme.run(state, c.steps);
  const ConservedTotals after = conserved_totals(state, scheme.moments());
  {
    auto f = open_output(o, "checkpoint.bin", std::ios::out | std::ios::binary);
    write_checkpoint(f, state, scheme.params().dt(), scheme.params().lambda());
  }
  {
    auto f = open_output(o, "moments.csv");
    write_moment_csv(f, state, scheme.moments());
  }
  if (!o.quiet) {
    std::ostream& out = out_of(o);
    const auto old = out.precision(17);
    const int d = shape.dim();
    out << "steps " << c.steps << ", t = " << state.time(scheme.params().dt()) << '\n';
    out << "mass: initial " << before.mass << ", final " << after.mass << ", relative drift "
        << std::abs(after.mass - before.mass) / std::abs(before.mass) << '\n';
    for (int a = 0; a < d; ++a)
      out << "momentum[" << a << "]: initial " << before.momentum[a] << ", final "
          << after.momentum[a] << ", drift " << std::abs(after.momentum[a] - before.momentum[a])
          << '\n';
    out.precision(old);
  }
  return kExitOk;
}

void require_refinement(const std::vector<int>& r, const std::string& what) {
  if (r.size() < 4)
    throw InvalidStudy(what + " needs at least 4 resolutions, got " + std::to_string(r.size()));
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i] != 2 * r[i - 1])
      throw InvalidStudy(what + " resolutions must double");
}

void write_sweep_csv(std::ostream& f, const ViscosityStudy& st) {
  f << "s_shear,N,dt,nu_measured,nu_predicted,nu_floor,relative_error,below_floor\n";
  f << std::setprecision(17);
  for (const auto& m : st.sweep)
    f << m.s_shear << ',' << m.n << ',' << m.dt << ',' << m.nu_measured << ',' << m.nu_predicted
      << ',' << m.nu_floor << ',' << m.relative_error << ',' << (m.below_floor ? 1 : 0) << '\n';
}

int verify(const RunConfig& c, const std::string& study, const CommandOptions& o) {
  const bool all = study == "all";
  const bool order = all || study == "prop3" || study == "prop4" || study == "prop5" ||
                     study == "prop6";
  const bool viscosity = all || study == "viscosity";
  if (!order && !viscosity)
    throw InvalidStudy("unknown study '" + study +
                       "' (expected prop3, prop4, prop5, prop6, viscosity or all)");

  std::vector<RefinementStudy> reported;
  std::vector<std::string> warnings;
  if (order) {
    const StudySetup setup = c.study_setup();
    const auto results = measure_all(setup);
    for (auto& st : run_order_studies(setup, results)) {
      const bool wanted = all || st.experiment == study ||
                          (study == "prop6" && st.experiment == "prop6-mass");
      if (wanted)
        reported.push_back(std::move(st));
    }
  }
  std::optional<ViscosityStudy> visc;
  if (viscosity) {
    require_refinement(c.viscosity.resolutions, "the viscosity study");
    visc = run_viscosity_study(c.shear_wave(), c.viscosity.rates, c.viscosity.resolution,
                               c.viscosity.resolutions);
    RefinementStudy st = visc->refinement;
    st.passed = visc->passed;
    if (!visc->passed && visc->refinement.passed)
      st.note = "viscosity sweep outside 2% of the prediction";
    for (const auto& m : visc->sweep)
      if (!m.warning.empty())
        warnings.push_back(m.warning);
    auto f = open_output(o, "viscosity_sweep.csv");
    write_sweep_csv(f, *visc);
    reported.push_back(std::move(st));
  }

  bool passed = true;
  std::ostream& out = out_of(o);
  for (const auto& st : reported) {
    auto f = open_output(o, st.experiment + ".csv");
    write_study_csv(f, st);
    out << summary_line(st) << '\n';
    if (!o.quiet && !st.note.empty())
      err_of(o) << st.experiment << ": " << st.note << '\n';
    passed = passed && st.passed;
  }
  if (!o.quiet) {
    for (const auto& w : warnings)
      err_of(o) << "warning: " << w << '\n';
    if (visc)
      for (const auto& m : visc->sweep)
        out << "  s_shear " << m.s_shear << ": nu " << m.nu_measured << " (predicted "
            << m.nu_predicted << ", floor " << m.nu_floor << ")\n";
  }
  return passed ? kExitOk : kExitVerification;
}

} // namespace

int cmd_analyze(const RunConfig& config, const CommandOptions& options) {
  return guarded(options, [&] { return analyze(config, options); });
}

int cmd_run(const RunConfig& config, const CommandOptions& options) {
  return guarded(options, [&] { return run(config, options); });
}

int cmd_verify(const RunConfig& config, const std::string& study, const CommandOptions& options) {
  return guarded(options, [&] { return verify(config, study, options); });
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& study, const CommandOptions& options) {
  return guarded(options, [&] {
    const RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (command == "analyze")
      return analyze(config, options);
    if (command == "run")
      return run(config, options);
    if (command == "verify")
      return verify(config, study.empty() ? "all" : study, options);
    throw ConfigError("unknown command '" + command + "' (expected analyze, run or verify)");
  });
}

} // namespace lbmeq::cli
