#pragma once

#include <ostream>

namespace implicert {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInternal = 2;

/// Runs one CLI job (`certify`, `certify-batch`, `oracle <quantity>`,
/// `bench parity`, `selftest`) and returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace implicert
