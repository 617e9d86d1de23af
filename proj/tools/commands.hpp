#pragma once
// verify / scatter / export front end.

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rootscat::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParameterRejected = 2,
  kConfigError = 3,
  kBudgetExceeded = 4,
  kIoError = 5,
  kLeakageOrDepth = 6,
  kUsage = 64,
  kInternal = 70,
};

struct Check {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  std::size_t cases = 0;
  bool pass() const { return cases == 0 || residual <= tolerance; }
};

// suites: identities (alias appendixA), free-laplacian, laplacian, smatrix
std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg);

// args excludes the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootscat::cli
