#pragma once

#include <iosfwd>

namespace modsel {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitConfig = 2, kExitBudget = 3, kExitViolation = 4 };

// Entry point for the modsel tool. Machine-readable JSON goes to `out` (or the
// --out file), human-readable tables and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modsel
