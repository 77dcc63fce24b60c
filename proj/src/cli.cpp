#include "cdr/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

namespace cdr::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError(std::string("malformed ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

const std::vector<std::string> kSweepKeys = {
    "antennas", "snr-db", "trials", "algorithms", "seed",
    "out",      "pia-max-iter", "pia-init", "threads",
};

}  // namespace

std::vector<double> parse_snr_list(std::string_view text) {
  text = trim(text);
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("SNR range must be a:step:b");
    const double a = parse_number<double>(parts[0], "SNR");
    const double step = parse_number<double>(parts[1], "SNR step");
    const double b = parse_number<double>(parts[2], "SNR");
    if (!(step > 0.0) || b < a) throw UsageError("SNR range needs step > 0 and a <= b");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * step);
    return out;
  }
  std::vector<double> out;
  for (auto p : split(text, ',')) out.push_back(parse_number<double>(p, "SNR"));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto p : split(text, ',')) out.push_back(parse_number<int>(p, "integer"));
  return out;
}

std::vector<Algorithm> parse_algorithms(std::string_view text) {
  std::vector<Algorithm> out;
  for (auto p : split(text, ',')) {
    if (p.empty()) continue;
    const auto a = algorithm_from_string(p);
    if (!a) throw UsageError("unknown algorithm '" + std::string(p) + "'");
    out.push_back(*a);
  }
  if (out.empty()) throw UsageError("algorithm set is empty");
  return out;
}

PiaInit parse_pia_init(std::string_view text) {
  text = trim(text);
  if (text == "pureamp") return PiaInit::PureAmp;
  if (text == "maxsnr1") return PiaInit::MaxSnr1;
  if (text == "maxsinr2") return PiaInit::MaxSinr2;
  if (text == "ones") return PiaInit::Ones;
  throw UsageError("unknown PIA init '" + std::string(text) + "'");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

Request parse_cli(int argc, const char* const* argv) {
  CLI::App app{"Relay beamforming sum-rate simulator for coordinated direct/relay transmission",
               "cdr-sim"};
  app.require_subcommand(1);

  std::map<std::string, std::string> flags;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over SNR and antenna count");
  auto flag = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    return sub->add_option("--" + key, flags[key], help);
  };
  std::map<std::string, CLI::Option*> sweep_opts;
  sweep_opts["antennas"] = flag(sweep, "antennas", "Relay antenna counts, e.g. 1,2,4,8");
  sweep_opts["snr-db"] = flag(sweep, "snr-db", "SNR list (dB) or range a:step:b");
  sweep_opts["trials"] = flag(sweep, "trials", "Channel draws per (SNR, M) point");
  sweep_opts["algorithms"] =
      flag(sweep, "algorithms", "Subset of pia,asa,lss,maxsnr1,maxsinr2,pureamp,upper");
  sweep_opts["seed"] = flag(sweep, "seed", "Master seed (u64)");
  sweep_opts["out"] = flag(sweep, "out", "CSV output path");
  sweep_opts["pia-max-iter"] = flag(sweep, "pia-max-iter", "PIA iteration cap");
  sweep_opts["pia-init"] = flag(sweep, "pia-init", "pureamp|maxsnr1|maxsinr2|ones");
  sweep_opts["threads"] = flag(sweep, "threads", "Worker threads");
  std::string config_path;
  sweep->add_option("--config", config_path, "key=value file applied before the flags");

  auto* single = app.add_subcommand("single", "Run one trial and print per-algorithm details");
  std::map<std::string, CLI::Option*> single_opts;
  single_opts["antennas"] = single->add_option("--antennas", flags["s-antennas"], "M");
  single_opts["snr-db"] = single->add_option("--snr-db", flags["s-snr-db"], "SNR in dB");
  single_opts["seed"] = single->add_option("--seed", flags["s-seed"], "Seed (u64)");
  single_opts["pia-max-iter"] =
      single->add_option("--pia-max-iter", flags["s-pia-max-iter"], "PIA iteration cap");
  single_opts["pia-init"] = single->add_option("--pia-init", flags["s-pia-init"], "PIA init");
  bool dump = false;
  single->add_flag("--dump-solution", dump, "Print the beamforming matrices");

  Request req;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    req.command = Command::Help;
    req.help = app.help();
    return req;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (sweep->parsed()) {
    std::map<std::string, std::string> merged;
    if (!config_path.empty()) {
      merged = read_config_file(config_path);
      for (const auto& [key, value] : merged) {
        (void)value;
        if (std::find(kSweepKeys.begin(), kSweepKeys.end(), key) == kSweepKeys.end()) {
          throw UsageError("unknown config key '" + key + "'");
        }
      }
    }
    for (const auto& key : kSweepKeys) {
      if (sweep_opts[key]->count() > 0) merged[key] = flags[key];
    }

    SweepConfig& cfg = req.sweep;
    req.command = Command::Sweep;
    if (auto it = merged.find("antennas"); it != merged.end()) {
      cfg.antennas = parse_int_list(it->second);
    }
    if (auto it = merged.find("snr-db"); it != merged.end()) {
      cfg.snr_db = parse_snr_list(it->second);
    }
    if (auto it = merged.find("trials"); it != merged.end()) {
      cfg.trials = parse_number<int>(it->second, "trial count");
    }
    if (auto it = merged.find("algorithms"); it != merged.end()) {
      cfg.algorithms = parse_algorithms(it->second);
    }
    if (auto it = merged.find("seed"); it != merged.end()) {
      cfg.seed = parse_number<std::uint64_t>(it->second, "seed");
    }
    if (auto it = merged.find("out"); it != merged.end()) cfg.out = it->second;
    if (auto it = merged.find("pia-max-iter"); it != merged.end()) {
      cfg.pia.max_iter = parse_number<int>(it->second, "iteration cap");
    }
    if (auto it = merged.find("pia-init"); it != merged.end()) {
      cfg.pia.init = parse_pia_init(it->second);
    }
    if (auto it = merged.find("threads"); it != merged.end()) {
      cfg.threads = parse_number<int>(it->second, "thread count");
    }
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return req;
  }

  SingleConfig& sc = req.single;
  req.command = Command::Single;
  if (single_opts["antennas"]->count() > 0) {
    sc.antennas = parse_number<int>(flags["s-antennas"], "antenna count");
  }
  if (single_opts["snr-db"]->count() > 0) {
    sc.snr_db = parse_number<double>(flags["s-snr-db"], "SNR");
  }
  if (single_opts["seed"]->count() > 0) {
    sc.seed = parse_number<std::uint64_t>(flags["s-seed"], "seed");
  }
  if (single_opts["pia-max-iter"]->count() > 0) {
    sc.pia.max_iter = parse_number<int>(flags["s-pia-max-iter"], "iteration cap");
  }
  if (single_opts["pia-init"]->count() > 0) sc.pia.init = parse_pia_init(flags["s-pia-init"]);
  sc.dump_solution = dump;
  if (sc.antennas < 1) throw UsageError("antenna count must be >= 1");
  if (sc.pia.max_iter < 1) throw UsageError("pia max_iter must be >= 1");
  if (!std::isfinite(sc.snr_db)) throw UsageError("SNR must be finite");
  return req;
}

void run_single(const SingleConfig& cfg, std::ostream& os) {
  const double power = db_to_linear(cfg.snr_db);
  SystemParams params{cfg.antennas, power, power};
  std::mt19937_64 rng(trial_seed(cfg.seed, 0, cfg.antennas, 0));
  const ChannelSet cs = sample_channels(params, rng);
  const QuadraticForms forms = build_forms(cs, power, power);

  char line[200];
  std::snprintf(line, sizeof(line), "M=%d  snr_db=%g  P=P_R=%.6g  channel_hash=%016llx\n",
                cfg.antennas, cfg.snr_db, power,
                static_cast<unsigned long long>(channel_hash(cs)));
  os << line;
  std::snprintf(line, sizeof(line), "%-9s %12s %12s %12s %12s %6s %5s %12s\n", "algorithm",
                "rate1", "rate2", "sum_rate", "frob_norm", "iters", "conv", "kkt_resid");
  os << line;

  auto print = [&](const std::string& name, const RatePair& r, double frob, int iters,
                   bool conv, double kkt) {
    std::snprintf(line, sizeof(line), "%-9s %12.6f %12.6f %12.6f %12.6g %6d %5d %12.3e\n",
                  name.c_str(), r.r1, r.r2, r.sum, frob, iters, conv ? 1 : 0, kkt);
    os << line;
  };
  std::vector<Solution> sols;
  sols.push_back(pia(forms, cfg.pia));
  sols.push_back(asa(forms));
  sols.push_back(lss(forms));
  sols.push_back(max_snr1(forms));
  sols.push_back(max_sinr2(forms));
  for (const auto& s : sols) {
    print(s.algorithm, s.rates, s.W.norm(), s.iterations, s.converged,
          kkt_residual(forms, s.w_tilde));
  }
  const Beamformer amp = pure_amplification(cs, power, power);
  print("pureamp", sum_rate(cs, amp, power), amp.norm(), 0, true,
        kkt_residual(forms, whiten(forms, amp)));
  const BoundBreakdown ub = r_ub(cs, power, power);
  print("upper", RatePair{ub.r1_at_opt, ub.r2_at_opt, ub.r_ub, false}, 0.0, 0, true, 0.0);
  std::snprintf(line, sizeof(line), "upper bound split: kappa1=%.6f  P1=%.6g  P2=%.6g\n",
                ub.kappa1, ub.p1, power - ub.p1);
  os << line;

  if (cfg.dump_solution) {
    const Eigen::IOFormat fmt(10, 0, ", ", "\n", "  [", "]");
    for (const auto& s : sols) {
      os << s.algorithm << " W =\n" << s.W.format(fmt) << "\n";
    }
    os << "pureamp W =\n" << amp.format(fmt) << "\n";
  }
}

}  // namespace cdr::cli
