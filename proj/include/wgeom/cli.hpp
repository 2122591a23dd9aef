#pragma once

namespace wgeom::cli {

// Exit codes of the command line tool.
enum ExitCode : int {
  kOk = 0,
  kToleranceBreach = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

// Entry point of the `wgeom` tool: wgeom <subcommand> [--config f] [--out d] [--seed s] [--n n] [--N N].
int run(int argc, char** argv);

}  // namespace wgeom::cli
