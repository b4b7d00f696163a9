#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace titchlab::cli {

enum class Format { csv, json };

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kCapacity = 2,
  kPropertyFailure = 3,
};

/// Everything one invocation needs. Numeric parameters are kept by name;
/// each subcommand reads the ones it uses and applies its defaults.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::int64_t> ints;
  std::map<std::string, double> reals;
  std::map<std::string, std::string> strings;
  std::vector<std::int64_t> scales;  // trend
  bool flag_lambda = false;          // two-squares: Lambda-weighted variant
  unsigned threads = 0;
  std::string output_path;           // empty: stdout
  Format format = Format::csv;
  std::uint64_t seed = 1;
  bool timing = false;               // record wall_s; otherwise written as 0
};

// Parses argv into a RunConfig and runs it. Returns the process exit code.
int main_entry(int argc, char** argv);

int run(const RunConfig& config);

// Module property suites; prints one deterministic line per check.
int selftest(const RunConfig& config, std::ostream& out);

}  // namespace titchlab::cli
