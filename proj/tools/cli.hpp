#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smoothck/design.hpp"
#include "smoothck/error.hpp"
#include "smoothck/experiment.hpp"

namespace smoothck::cli {

/// Bad command line. The message includes usage text.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kSimulation = 3,
  kInference = 4,
  kIo = 5,
};

struct BaselineSpec {
  /// Probe points per dimension (a regular grid over the domain).
  std::size_t probes = 0;
  std::uint64_t runs = 0;
};

struct CliConfig {
  enum class Command { Estimate, Smc };
  Command command = Command::Estimate;

  std::filesystem::path model_path;
  std::filesystem::path property_path;
  std::vector<VariedParameter> params;
  std::vector<std::pair<std::string, double>> fixed;
  DesignSpec train;
  std::uint64_t runs = 10;
  std::vector<std::size_t> predict;
  bool optimize = true;
  double amplitude = 1.0;
  std::vector<double> lengthscales;
  InputUnits units = InputUnits::Rescaled;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double horizon = 0.0;
  std::size_t pilot_runs = 100;
  std::optional<BaselineSpec> baseline;
  std::string out_prefix;
  bool quiet = false;
  /// Set when --help was requested; `help_text` holds the text to print.
  bool help = false;
  std::string help_text;
};

/// Parses arguments (without the program name). Throws UsageError for bad
/// flags and IoError when an input file is unreadable.
CliConfig parse_args(const std::vector<std::string>& args);

/// Runs the configured command; returns an exit code. Reports go to `out`,
/// progress and diagnostics to `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Exit code for an exception escaping parse_args or run.
int exit_code_for(const std::exception& e);

/// parse_args + run with every failure mapped to an exit code.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smoothck::cli
