#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdr/harness.hpp"

namespace cdr::cli {

/// Bad command line or config file; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Sweep, Single, Help };

struct SingleConfig {
  int antennas = 2;
  double snr_db = 20.0;
  std::uint64_t seed = 1;
  bool dump_solution = false;
  PiaConfig pia;
};

struct Request {
  Command command = Command::Help;
  SweepConfig sweep;
  SingleConfig single;
  std::string help;
};

/// Parses `cdr-sim sweep ...` or `cdr-sim single ...`. For sweep, a
/// `--config` file is applied first and explicit flags override it.
Request parse_cli(int argc, const char* const* argv);

/// "0,10,20" or "a:step:b" (inclusive of b when it lies on the lattice).
std::vector<double> parse_snr_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
std::vector<Algorithm> parse_algorithms(std::string_view text);
PiaInit parse_pia_init(std::string_view text);

/// `key=value` lines; blank lines and `#` comments are ignored. Keys are the
/// long flag names without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// One paired trial with per-algorithm diagnostics, as printed by `single`.
void run_single(const SingleConfig& cfg, std::ostream& os);

}  // namespace cdr::cli
