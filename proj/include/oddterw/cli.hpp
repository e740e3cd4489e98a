#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace oddterw::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

inline constexpr int kClosureMaxM = 5;
inline constexpr std::uint64_t kMinPrime = 1000000;

struct RunConfig {
  int m = 0;
  std::set<std::string> checks;
  std::vector<std::uint64_t> primes;
  bool exact = false;
  bool allow_large = false;
  unsigned jobs = 1;
  std::string out_dir;
  std::string format = "json";
};

// All recognised check names, "all" excluded.
const std::vector<std::string>& known_checks();

// Throws ParameterError if the configuration is unusable.
void validate(const RunConfig& config);

// Runs the selected checks and returns the aggregated report.
nlohmann::json run_checks(const RunConfig& config);

int cmd_build(int m, const std::string& out_dir, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_tdim(int m_max, int closure_max, std::ostream& out, std::ostream& err);

// Entry point shared by the executable and the tests.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace oddterw::cli
