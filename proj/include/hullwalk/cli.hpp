#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hullwalk {

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntimeError = 1,
  kExitConfigError = 2,
  kExitAcceptanceFailed = 3,
};

// Entry point of the `hullwalk` tool. `args` excludes the program name.
//
//   hullwalk <command> --config PATH [--out PATH] [--seed U64] [--reps N] [--threads N]
//
// commands: variance-sweep, clt, swb-check, cauchy-check, decompose-exact,
// event-prob, theory.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hullwalk
