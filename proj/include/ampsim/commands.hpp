#pragma once

#include "ampsim/config.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>

namespace ampsim {

enum class Command { op_point, transient, thd, spectrum, sweep, beta_scan, figures };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command cmd);

/// Process exit codes. Every failure maps to exactly one of these.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,    ///< configuration, usage or output-path error
    kExitNumerical = 2,  ///< model domain violation or integrator instability
};

/// Runs one subcommand, writing its CSVs under cfg.output_path. Progress goes to
/// `log`, diagnostics to `err`. Files written by a failing run are removed.
int run_command(Command cmd, const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace ampsim
