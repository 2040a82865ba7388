#pragma once

// Command implementations behind the CLI. Each returns the text destined for
// stdout and stderr plus the exit status, so they can be driven in-process.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetlag/config.hpp"

namespace jetlag {

inline constexpr const char* kVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;     // verify found a failing invariant
inline constexpr int irregular = 2;  // not Kronecker h-regular, or degenerate
inline constexpr int usage = 64;     // bad arguments or config
}  // namespace exit_code

struct CommandOptions {
  std::optional<std::string> point;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

struct CommandResult {
  int exit = exit_code::ok;
  std::string out;
  std::string err;
};

const std::vector<std::string>& command_names();

/// Runs one command. Config and usage problems become exit 64.
CommandResult run_command(const std::string& name, const ProblemConfig& cfg, const CommandOptions& opt);

/// One named invariant evaluated by `verify`.
struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string note;
};

std::vector<InvariantCheck> verify_checks(const ProblemConfig& cfg, std::uint64_t seed);

}  // namespace jetlag
