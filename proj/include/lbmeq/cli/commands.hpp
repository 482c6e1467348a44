#ifndef LBMEQ_CLI_COMMANDS_HPP_
#define LBMEQ_CLI_COMMANDS_HPP_

#include <iosfwd>
#include <string>

#include "lbmeq/cli/config.hpp"

namespace lbmeq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1, // I/O and anything unexpected
  kExitConfig = 2,
  kExitConstruction = 3,
  kExitDiverged = 4,
  kExitVerification = 5,
};

struct CommandOptions {
  std::string out_dir = ".";
  bool quiet = false;
  std::ostream* out = nullptr; // std::cout when null
  std::ostream* err = nullptr; // std::cerr when null
};

// report.csv, report.json and a printed summary.
int cmd_analyze(const RunConfig& config, const CommandOptions& options);
// Runs scheme.steps steps from equilibrium; writes checkpoint.bin and
// moments.csv and prints the conservation audit.
int cmd_run(const RunConfig& config, const CommandOptions& options);
// study: prop3 | prop4 | prop5 | prop6 | viscosity | all. Writes one CSV per
// experiment and prints one summary line per experiment.
int cmd_verify(const RunConfig& config, const std::string& study, const CommandOptions& options);

// Loads `config_path` (built-in defaults when empty) and dispatches to the
// command. Every failure is mapped to its exit code.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& study, const CommandOptions& options);

} // namespace lbmeq::cli

#endif // LBMEQ_CLI_COMMANDS_HPP_
