#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgelbp::cli {

/// Exit status: 0 success, 1 runtime or data failure, 2 usage error.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// EDGELBP_THREADS when set to a positive integer, else the hardware
/// concurrency.
int worker_threads();

}  // namespace edgelbp::cli
