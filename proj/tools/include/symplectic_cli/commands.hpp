#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symplectic::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitCertification = 4,
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symplectic::cli
