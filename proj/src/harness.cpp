#include "cdr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace cdr {

namespace {

constexpr std::array<std::string_view, 7> kNames = {
    "pia", "asa", "lss", "maxsnr1", "maxsinr2", "pureamp", "upper",
};

std::size_t registry_index(Algorithm a) {
  return static_cast<std::size_t>(
      std::find(kAlgorithmRegistry.begin(), kAlgorithmRegistry.end(), a) -
      kAlgorithmRegistry.begin());
}

TrialRecord record_from(const RatePair& rates, int iterations, bool converged) {
  TrialRecord r;
  r.rate1 = rates.r1;
  r.rate2 = rates.r2;
  r.sum_rate = rates.sum;
  r.iterations = iterations;
  r.converged = converged;
  r.degenerate = rates.degenerate;
  return r;
}

void fnv_mix(std::uint64_t& h, double x) {
  unsigned char bytes[sizeof(double)];
  std::memcpy(bytes, &x, sizeof(double));
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

std::string_view to_string(Algorithm a) { return kNames[registry_index(a)]; }

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kAlgorithmRegistry[i];
  }
  return std::nullopt;
}

void SweepConfig::validate() const {
  if (antennas.empty()) throw std::invalid_argument("antenna list is empty");
  for (int m : antennas) {
    if (m < 1) throw std::invalid_argument("antenna counts must be >= 1");
  }
  if (snr_db.empty()) throw std::invalid_argument("SNR list is empty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw std::invalid_argument("SNR values must be finite");
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("algorithm set is empty");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (pia.max_iter < 1) throw std::invalid_argument("pia max_iter must be >= 1");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, int antennas, int trial) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(snr_index));
  h = splitmix64(h ^ static_cast<std::uint64_t>(antennas));
  h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
  return h;
}

std::uint64_t channel_hash(const ChannelSet& cs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](cplx z) {
    fnv_mix(h, z.real());
    fnv_mix(h, z.imag());
  };
  for (Eigen::Index i = 0; i < cs.h_r1.size(); ++i) mix(cs.h_r1(i));
  for (Eigen::Index i = 0; i < cs.h_rb.size(); ++i) mix(cs.h_rb(i));
  for (Eigen::Index i = 0; i < cs.h_br.size(); ++i) mix(cs.h_br(i));
  for (Eigen::Index i = 0; i < cs.h_2r.size(); ++i) mix(cs.h_2r(i));
  mix(cs.h_21);
  mix(cs.h_2b);
  return h;
}

std::vector<TrialRecord> run_trial(const SweepConfig& cfg, std::size_t snr_index, int antennas,
                                   int trial) {
  const double snr_db = cfg.snr_db.at(snr_index);
  const double power = db_to_linear(snr_db);
  SystemParams params{antennas, power, power};
  std::mt19937_64 rng(trial_seed(cfg.seed, snr_index, antennas, trial));
  const ChannelSet cs = sample_channels(params, rng);
  const std::uint64_t hash = channel_hash(cs);

  std::vector<Algorithm> selected = cfg.algorithms;
  std::sort(selected.begin(), selected.end(),
            [](Algorithm l, Algorithm r) { return registry_index(l) < registry_index(r); });
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  std::optional<QuadraticForms> forms;
  bool forms_failed = false;
  auto need_forms = [&]() -> const QuadraticForms* {
    if (!forms && !forms_failed) {
      try {
        forms = build_forms(cs, power, power);
      } catch (const std::exception&) {
        forms_failed = true;
      }
    }
    return forms ? &*forms : nullptr;
  };

  std::vector<TrialRecord> out;
  for (Algorithm alg : selected) {
    TrialRecord rec;
    try {
      switch (alg) {
        case Algorithm::PureAmp: {
          const Beamformer w = pure_amplification(cs, power, power);
          rec = record_from(sum_rate(cs, w, power), 0, true);
          break;
        }
        case Algorithm::Upper: {
          const BoundBreakdown b = r_ub(cs, power, power, cfg.bound);
          rec = record_from(RatePair{b.r1_at_opt, b.r2_at_opt, b.r_ub, !std::isfinite(b.r_ub)},
                            0, true);
          break;
        }
        default: {
          const QuadraticForms* f = need_forms();
          if (f == nullptr) throw std::runtime_error("degenerate channel");
          Solution s;
          switch (alg) {
            case Algorithm::Pia: s = pia(*f, cfg.pia); break;
            case Algorithm::Asa: s = asa(*f, cfg.asa); break;
            case Algorithm::Lss: s = lss(*f, cfg.lss); break;
            case Algorithm::MaxSnr1: s = max_snr1(*f); break;
            default: s = max_sinr2(*f); break;
          }
          const bool iterative = alg == Algorithm::Pia || alg == Algorithm::Asa ||
                                 alg == Algorithm::Lss;
          rec = record_from(s.rates, iterative ? s.iterations : 0, s.converged);
          break;
        }
      }
    } catch (const std::exception&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec = TrialRecord{};
      rec.rate1 = rec.rate2 = rec.sum_rate = nan;
      rec.converged = false;
      rec.degenerate = true;
    }
    rec.snr_db = snr_db;
    rec.antennas = antennas;
    rec.algorithm = alg;
    rec.trial = trial;
    rec.channel_hash = hash;
    out.push_back(rec);
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Task {
    std::size_t snr_index;
    int antennas;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
    for (int m : cfg.antennas) {
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({s, m, t});
    }
  }

  std::vector<std::vector<TrialRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.threads));
  auto worker = [&](std::size_t id) {
    try {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        slots[i] = run_trial(cfg, tasks[i].snr_index, tasks[i].antennas, tasks[i].trial);
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (cfg.threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker, static_cast<std::size_t>(t));
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  for (auto& slot : slots) {
    result.records.insert(result.records.end(), slot.begin(), slot.end());
  }
  result.summary = summarize(cfg, result.records);
  return result;
}

std::vector<SummaryRow> summarize(const SweepConfig& cfg,
                                  const std::vector<TrialRecord>& records) {
  // A trial whose channel is degenerate for any algorithm is dropped from
  // every mean so that the comparison stays paired.
  std::map<std::tuple<double, int, int>, bool> bad_trial;
  for (const auto& r : records) {
    auto& flag = bad_trial[{r.snr_db, r.antennas, r.trial}];
    flag = flag || r.degenerate;
  }
  std::map<std::tuple<double, int, std::size_t>, SummaryRow> acc;
  for (const auto& r : records) {
    auto& row = acc[{r.snr_db, r.antennas, registry_index(r.algorithm)}];
    row.snr_db = r.snr_db;
    row.antennas = r.antennas;
    row.algorithm = r.algorithm;
    if (bad_trial[{r.snr_db, r.antennas, r.trial}]) {
      ++row.degenerate;
    } else {
      row.mean_sum_rate += r.sum_rate;
      ++row.count;
    }
  }
  std::vector<SummaryRow> rows;
  for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
    for (int m : cfg.antennas) {
      for (std::size_t a = 0; a < kAlgorithmRegistry.size(); ++a) {
        auto it = acc.find({cfg.snr_db[s], m, a});
        if (it == acc.end()) continue;
        SummaryRow row = it->second;
        row.mean_sum_rate = row.count > 0 ? row.mean_sum_rate / row.count
                                          : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
        acc.erase(it);  // repeated antenna/SNR values print once
      }
    }
  }
  return rows;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << format_number(r.snr_db) << ',' << r.antennas << ',' << to_string(r.algorithm) << ','
       << r.trial << ',' << format_number(r.rate1) << ',' << format_number(r.rate2) << ','
       << format_number(r.sum_rate) << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
       << '\n';
  }
}

void write_csv_file(const std::string& path, const std::vector<TrialRecord>& records) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(os, records);
  os.flush();
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

void print_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
  char line[160];
  std::snprintf(line, sizeof(line), "%8s %8s %-9s %14s %7s %10s\n", "snr_db", "antennas",
                "algorithm", "mean_sum_rate", "trials", "degenerate");
  os << line;
  for (const auto& r : rows) {
    const std::string name(to_string(r.algorithm));
    std::snprintf(line, sizeof(line), "%8.4g %8d %-9s %14.4f %7d %10d\n", r.snr_db, r.antennas,
                  name.c_str(), r.mean_sum_rate, r.count, r.degenerate);
    os << line;
  }
}

}  // namespace cdr
