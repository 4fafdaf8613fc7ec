#pragma once

#include <chrono>
#include <string>

namespace iconsift {

struct CommandResult {
  int exit_status = -1;  // -1 when killed by a signal or on timeout
  bool timed_out = false;
  std::string out;
};

/// Runs `command` through /bin/sh, feeding `input` to its standard input and
/// capturing standard output. Standard error is inherited. The child is
/// killed once `timeout` elapses. Throws Error(external_command) only when
/// the process cannot be started.
CommandResult run_command(const std::string& command, const std::string& input,
                          std::chrono::milliseconds timeout);

/// Single-quotes `arg` for /bin/sh.
std::string shell_quote(const std::string& arg);

}  // namespace iconsift
