#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ebfdr::cli {

// Runs the tool with args (excluding the program name). Data written to "-"
// goes to out; errors go to err as a single line "error: <kind>: <message>".
// Returns the process exit status: 0 ok, 2 usage/validation, 1 runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebfdr::cli
