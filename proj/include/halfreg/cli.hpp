#pragma once

#include <iosfwd>

namespace halfreg::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kInvalidInstance = 1;
constexpr int kInputError = 2;  // I/O, schema and usage errors
constexpr int kInternalError = 3;

/// Parses arguments and runs one subcommand. Everything that would go to
/// stdout/stderr goes to `out`/`err` unless an --out file is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halfreg::cli
