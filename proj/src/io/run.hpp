#pragma once
#include <string>

namespace charids {

// Command drivers shared by the C API and the command-line tool. Return
// value doubles as the process exit code:
//   0  success / all residual gates pass
//   1  verification tolerance failure
//   2  invalid configuration or inadmissible free data
//   3  solver stage failure (field blow-up, domain truncated)
//   4  missing or corrupt files
// Reports go to stdout (suppressed by quiet), errors to stderr.

int cmd_solve(const std::string& config_path, const std::string& out_dir, bool quiet);
int cmd_verify(const std::string& out_dir, bool quiet);
int cmd_convergence(const std::string& config_path, const std::string& out_dir, int levels,
                    bool quiet);

}  // namespace charids
