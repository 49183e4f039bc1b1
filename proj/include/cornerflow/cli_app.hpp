#pragma once

#include <string>
#include <vector>

namespace cornerflow {

/// Full command-line driver; returns the process exit code.
/// solve: 0 converged, 2 supersonic abort, 3 non-convergence, 1 bad config.
int run_cli(const std::vector<std::string>& args);

}  // namespace cornerflow
