#pragma once

#include <iosfwd>

namespace gibbs::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

/// Entry point of the `gibbs` tool. Writes results to `out`, messages to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace gibbs::cli
