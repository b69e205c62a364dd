#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prodridge {

/// Entry point of the command-line tool. `args` excludes the program name;
/// the first element is the subcommand:
///   simulate | bandwidth | modes | ridge | density | metrics | replay
/// Returns 0 on success. Failures write one JSON error record to `err`
/// ({"error": <code>, "message": ...}) and return nonzero.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prodridge
