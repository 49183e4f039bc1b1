#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cornerflow {

struct SuiteResult {
  std::string name;
  bool passed;
  std::string detail;  // measured quantities vs their bounds
  double seconds;
};

/// Named verification experiments, in acceptance order.
const std::vector<std::string>& suite_names();

/// Runs one suite; throws std::invalid_argument for unknown names.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 12345);

std::string format_suite_line(int index, const SuiteResult& r);

}  // namespace cornerflow
