// cdr-sim: relay beamforming sum-rate simulator.
//
//   cdr-sim sweep --antennas 1,2,4,8 --snr-db 0:5:30 --trials 500 --out results.csv
//   cdr-sim single --antennas 4 --snr-db 20 --seed 7 --dump-solution
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <exception>
#include <iostream>

#include "cdr/cli.hpp"

int main(int argc, char** argv) {
  cdr::cli::Request req;
  try {
    req = cdr::cli::parse_cli(argc, argv);
  } catch (const cdr::cli::UsageError& e) {
    std::cerr << "cdr-sim: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    switch (req.command) {
      case cdr::cli::Command::Help:
        std::cout << req.help;
        return 0;
      case cdr::cli::Command::Single:
        cdr::cli::run_single(req.single, std::cout);
        return 0;
      case cdr::cli::Command::Sweep: {
        const auto result = cdr::run_sweep(req.sweep);
        cdr::write_csv_file(req.sweep.out, result.records);
        cdr::print_summary(std::cout, result.summary);
        std::cout << "wrote " << result.records.size() << " rows to " << req.sweep.out << "\n";
        return 0;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "cdr-sim: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
