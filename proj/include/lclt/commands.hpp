#pragma once

#include <map>
#include <string>
#include <vector>

#include "lclt/config.hpp"
#include "lclt/verifier.hpp"

namespace lclt {

struct CommandOutput {
  std::vector<VerificationReport> reports;
  /// additional artifacts, file name -> content
  std::map<std::string, std::string> files;
  /// human-readable text for standard output
  std::string console;
};

const std::vector<std::string>& command_names();
bool command_needs_model(const std::string& command);

/// Runs one CLI command. Reports come back sorted and with tolerance
/// overrides applied. Throws ConfigError when the command needs a model
/// that the config lacks.
CommandOutput run_command(const std::string& command, const RunConfig& cfg);

}  // namespace lclt
