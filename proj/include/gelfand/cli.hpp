#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gelfand {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;   // verify check or spectral disagreement
inline constexpr int kExitUsage = 2;         // invalid flags or rejected input
inline constexpr int kExitIntegration = 3;   // integrator failure, or Undetermined with --strict

// Entry point of the gelfand tool: trace, classify, verify, spectral, profile.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gelfand
