#pragma once

namespace riemip {

/// Entry point of the `riemip` command line tool. Exit codes: 0 on success
/// (solver converged / checks passed), 1 on solver or analysis failure,
/// 2 on configuration errors.
int cli_run(int argc, const char* const* argv);

}  // namespace riemip
