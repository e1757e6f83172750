#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sponge {

struct CommandRequest {
    std::string subcommand;                    ///< validate, check, dims, dyndim, subsystem, converge, estimate, render
    std::vector<std::string> inputs;           ///< template path
    std::map<std::string, std::string> flags;  ///< long name without dashes -> raw value; switches hold "true"
    std::optional<std::string> help;           ///< set when --help was requested
};

struct CommandResult {
    int exit_code = 0;
    std::string out;  ///< report document, empty on failure
    std::string err;  ///< error document, empty on success
};

/// Throws SpongeError(InvalidArgument) on an unknown subcommand, missing
/// input or malformed flag.
CommandRequest parse_command_line(int argc, const char* const* argv);

/// Exit 0 with a report on `out`, 1 for bad input, 2 when a computation on
/// valid input fails. Failures leave `out` empty and put {"error", "message"}
/// on `err`.
CommandResult run(const CommandRequest& request);

/// parse_command_line followed by run, with parse failures mapped to exit 1.
CommandResult run_command_line(int argc, const char* const* argv);

}  // namespace sponge
