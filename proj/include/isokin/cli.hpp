// cli.hpp
//
// Command-line front end: solve, compare, fit-weights and energy.
// Exit codes: 0 success, 1 runtime failure, 2 validation or parse failure.

#pragma once

#include "isokin/error.hpp"

#include <ostream>

namespace isokin
{

int exit_code(ErrorCode code);

/// Runs one command. Errors go to `err` as a single JSON object.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace isokin
