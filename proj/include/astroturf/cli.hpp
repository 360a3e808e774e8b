#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace astroturf::cli {

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2 };

// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace astroturf::cli
