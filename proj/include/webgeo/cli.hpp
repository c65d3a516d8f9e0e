#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace webgeo::cli {

// Exit codes: 0 success, 2 configuration error, 3 data error, 4 non-convergence.
enum ExitCode : int { kOk = 0, kConfig = 2, kData = 3, kConvergence = 4 };

// Runs one subcommand (build, stats, embed, analyze, route, paths, synth,
// export-map). Failures print a single "error category=... command=...: ..."
// line on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace webgeo::cli
