#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdr/algorithms.hpp"
#include "cdr/upper_bound.hpp"

namespace cdr {

enum class Algorithm { Pia, Asa, Lss, MaxSnr1, MaxSinr2, PureAmp, Upper };

/// Registry order; also the row order within a trial.
inline constexpr std::array<Algorithm, 7> kAlgorithmRegistry = {
    Algorithm::Pia,      Algorithm::Asa,     Algorithm::Lss,   Algorithm::MaxSnr1,
    Algorithm::MaxSinr2, Algorithm::PureAmp, Algorithm::Upper,
};

std::string_view to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct SweepConfig {
  std::vector<int> antennas{1, 2, 4, 8};
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};  // P = P_R = 10^(dB/10)
  int trials = 500;
  std::vector<Algorithm> algorithms{kAlgorithmRegistry.begin(), kAlgorithmRegistry.end()};
  std::uint64_t seed = 1;
  std::string out = "results.csv";
  PiaConfig pia;
  AsaConfig asa;
  LssConfig lss;
  BoundSearchConfig bound;
  int threads = 1;

  /// Throws std::invalid_argument on an empty or out-of-range field.
  void validate() const;
};

struct TrialRecord {
  double snr_db = 0.0;
  int antennas = 0;
  Algorithm algorithm = Algorithm::Pia;
  int trial = 0;
  double rate1 = 0.0;
  double rate2 = 0.0;
  double sum_rate = 0.0;
  int iterations = 0;
  bool converged = true;
  bool degenerate = false;
  std::uint64_t channel_hash = 0;  // identical for every row of one trial
};

struct SummaryRow {
  double snr_db = 0.0;
  int antennas = 0;
  Algorithm algorithm = Algorithm::Pia;
  double mean_sum_rate = 0.0;
  int count = 0;       // trials entering the mean
  int degenerate = 0;  // trials excluded from the mean
};

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<SummaryRow> summary;
};

double db_to_linear(double db);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of one trial, independent of execution order:
/// splitmix64 folded over (master, snr index, antennas, trial).
std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, int antennas, int trial);

/// FNV-1a over the raw bytes of every channel coefficient.
std::uint64_t channel_hash(const ChannelSet& cs);

/// Draws one channel set for (snr index, M, trial) and evaluates every
/// selected algorithm on it, in registry order.
std::vector<TrialRecord> run_trial(const SweepConfig& cfg, std::size_t snr_index, int antennas,
                                   int trial);

/// All (snr, M, trial) combinations, rows ordered by (snr, M, trial,
/// registry) whatever the thread count.
SweepResult run_sweep(const SweepConfig& cfg);

std::vector<SummaryRow> summarize(const SweepConfig& cfg,
                                  const std::vector<TrialRecord>& records);

inline constexpr std::string_view kCsvHeader =
    "snr_db,antennas,algorithm,trial,rate1,rate2,sum_rate,iterations,converged";

/// 10 significant digits, printf %.10g.
std::string format_number(double x);

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);

/// Throws std::runtime_error if the file cannot be written.
void write_csv_file(const std::string& path, const std::vector<TrialRecord>& records);

void print_summary(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace cdr
