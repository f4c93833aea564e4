#pragma once

// Command-line front end. Each command is a plain function from RunConfig to
// a report so it can be driven from tests; run_cli adds argument parsing,
// output routing and exit codes:
//   0  success (including negative verdicts such as a failed certificate)
//   1  validation failure (bad arguments, values outside a domain)
//   2  numerical failure (non-finite evaluation, integration breakdown)

#include <array>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "homsphere/errors.hpp"
#include "homsphere/report.hpp"

namespace homsphere {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "HOMSPHERE_OUT_DIR";

class UsageError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  std::vector<double> values() const;
};

struct RunConfig {
  std::string subcommand;  // classify | geodesic | foliation | sweep
  std::string mode;        // foliation: build | check | certify
  std::vector<std::string> triple;
  std::optional<std::string> eps;
  double theta = std::numbers::pi / 3;
  double t_end = 4 * std::numbers::pi;
  double step = 1e-3;
  double tol = 1e-6;
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";  // json | csv
  /// foliation: y1 | y2 | y3 | theorem1 | killing:a1,a2,a3,h
  std::string field = "theorem1";
  bool hopf_columns = false;
  GridAxis eps_grid{0.25, 4.0, 10};
  GridAxis theta_grid{0.1, std::numbers::pi - 0.1, 10};
  bool integrate = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct CommandResult {
  Json report;
  /// Tabular rendering for --format csv; empty when the command has none.
  std::string csv;
};

CommandResult cmd_classify(const RunConfig& cfg);
CommandResult cmd_geodesic(const RunConfig& cfg);
CommandResult cmd_foliation(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);

/// Dispatches on cfg.subcommand.
CommandResult run_command(const RunConfig& cfg);

/// Where the output of `cfg` goes: --out, else $HOMSPHERE_OUT_DIR/<name>.<ext>,
/// else empty (standard output).
std::string output_path(const RunConfig& cfg);

/// Full front end. Runs the isomorphism self-test first.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homsphere
