#pragma once

namespace jenga::cli {

/// Full command-line driver; returns the process exit code.  Failures print
/// one machine-readable JSON object to stderr:
///   {"error": {"code": "...", "message": "..."}}
/// Exit codes: 0 ok, 2 usage, 3 manifest, 4 generation, 5 backend, 1 other.
int run(int argc, const char* const* argv);

}  // namespace jenga::cli
