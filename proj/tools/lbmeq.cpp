// lbmeq: equivalent-PDE report, simulation runs and refinement studies for
// multiple-relaxation-time lattice Boltzmann schemes.
#include <string>

#include "CLI11.hpp"
#include "lbmeq/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lattice Boltzmann equivalent equations: analyze, run, verify"};
  app.require_subcommand(1);

  std::string config;
  lbmeq::cli::CommandOptions options;
  std::string study = "all";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "YAML configuration file (defaults when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_dir, "output directory")->capture_default_str();
    sub->add_flag("--quiet", options.quiet, "print only results");
  };
  auto* analyze = app.add_subcommand("analyze", "write the equivalent-equation report");
  auto* run = app.add_subcommand("run", "run the scheme and dump the final state");
  auto* verify = app.add_subcommand("verify", "run refinement studies");
  add_common(analyze);
  add_common(run);
  add_common(verify);
  verify->add_option("--study", study, "prop3, prop4, prop5, prop6, viscosity or all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lbmeq::cli::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return lbmeq::cli::run_command(command, config, study, options);
}
