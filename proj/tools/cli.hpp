#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freelevy::cli {

// Runs one subcommand. args excludes the program name. Returns the process
// exit status: 0 success, 2 validation error, 3 numeric failure. Errors are
// reported as a JSON object on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freelevy::cli
