// latlab: reproduction driver for the latency laboratory. Subcommands load
// a JSON config, run the matching library sweep or campaign, and emit the
// rows as CSV (stable column order) or as a JSON envelope with the
// effective config echoed back.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latlab/early_latency.hpp"
#include "latlab/fbl_bounds.hpp"
#include "latlab/multihop.hpp"
#include "latlab/ofdm.hpp"
#include "latlab/seq_detect.hpp"

using nlohmann::json;
using namespace latlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::string config_path;
  std::string out_path;      // empty: stdout
  std::string format = "csv";
  long long seed = -1;       // -1: keep config value
  long long trials = -1;
  int workers = -1;
};

struct CommandResult {
  std::vector<std::string> columns;
  std::vector<json> rows;
  json summary;            // command-specific extras (JSON output only)
  long long feasible = 0;  // rows with all cells populated
};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// effective scalar: CLI override wins over the config field, then a default
long long effective(const json& cfg, const char* key, long long override_v,
                    long long fallback) {
  if (override_v >= 0) return override_v;
  if (cfg.contains(key)) return cfg.at(key).get<long long>();
  return fallback;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const CommandResult& res, const std::string& command,
          const json& effective_cfg, const RunOptions& opt) {
  std::ostringstream body;
  if (opt.format == "csv") {
    body << "# latlab " << command << " seed="
         << effective_cfg.value("seed", 1ll) << "\n";
    for (size_t c = 0; c < res.columns.size(); ++c)
      body << (c ? "," : "") << res.columns[c];
    body << "\n";
    for (const json& row : res.rows) {
      for (size_t c = 0; c < res.columns.size(); ++c)
        body << (c ? "," : "") << csv_cell(row.at(res.columns[c]));
      body << "\n";
    }
  } else {
    json env;
    env["version"] = kVersion;
    env["command"] = command;
    env["config"] = effective_cfg;
    env["seed"] = effective_cfg.value("seed", 1ll);
    env["timestamp"] = utc_timestamp();  // excluded from payload identity
    env["columns"] = res.columns;
    env["rows"] = res.rows;
    if (!res.summary.is_null()) env["summary"] = res.summary;
    body << env.dump(2) << "\n";
  }

  if (opt.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + opt.out_path);
    out << body.str();
  }
}

// ---- bounds: smallest blocklength/latency over a k grid x SNR set -------

CommandResult cmd_bounds(const json& cfg) {
  CommandResult res;
  res.columns = {"k", "snr_db", "n", "L"};
  const double eps = cfg.at("eps").get<double>();
  const double t = cfg.value("symbol_time", 1.0);
  const PowerConstraint pc = cfg.value("power_constraint", std::string("equal")) ==
                                     std::string("average")
                                 ? PowerConstraint::kAverage
                                 : PowerConstraint::kEqualOrMaximal;
  for (const json& s : cfg.at("snr_db")) {
    const double snr_db = s.get<double>();
    const double power = db_to_linear(snr_db);
    for (const json& kj : cfg.at("k_grid")) {
      const double k = kj.get<double>();
      json row;
      row["k"] = k;
      row["snr_db"] = snr_db;
      try {
        const MinLatencyResult r = min_latency(k, power, t, eps, pc);
        row["n"] = r.n_symbols;
        row["L"] = r.latency;
        ++res.feasible;
      } catch (const InfeasibleError&) {
        row["n"] = nullptr;
        row["L"] = nullptr;
      }
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

// ---- early-latency: normalized expected stop over (n, R, eps) cells -----

CommandResult cmd_early_latency(const json& cfg) {
  CommandResult res;
  res.columns = {"n", "R", "eps", "E_tau_over_T"};
  const double t = cfg.value("symbol_time", 1.0);
  for (const json& nj : cfg.at("n_grid")) {
    const double n = nj.get<double>();
    for (const json& rj : cfg.at("rates")) {
      const double rate = rj.get<double>();
      for (const json& ej : cfg.at("eps")) {
        const double eps = ej.get<double>();
        json row;
        row["n"] = n;
        row["R"] = rate;
        row["eps"] = eps;
        try {
          const double power = solve_power_for_final_error(rate, n, eps, t);
          row["E_tau_over_T"] = average_latency(power, rate, n, t);
          ++res.feasible;
        } catch (const InfeasibleError&) {
          row["E_tau_over_T"] = nullptr;
        }
        res.rows.push_back(std::move(row));
      }
    }
  }
  return res;
}

// ---- msprt / crc: Monte-Carlo stopping-time campaigns -------------------

Scenario parse_scenario(const json& sj) {
  Scenario sc;
  sc.id = sj.at("id").get<std::string>();
  const std::string kind = sj.at("kind").get<std::string>();
  if (kind == "msprt")
    sc.kind = DetectorKind::kMsprt;
  else if (kind == "wald")
    sc.kind = DetectorKind::kWald;
  else if (kind == "crc")
    sc.kind = DetectorKind::kCrcGenie;
  else
    throw std::domain_error("unknown detector kind: " + kind);
  sc.n = sj.at("n").get<int>();
  sc.k = sj.at("k").get<int>();
  sc.mod = sj.value("modulation", std::string("bpsk")) == std::string("qpsk")
               ? Modulation::kQpsk
               : Modulation::kBpsk;
  sc.snr_db = sj.value("snr_db", 0.0);
  sc.snr_is_ebn0 = sj.value("snr_is_ebn0", false);
  sc.sync_target_error = sj.value("sync_target_error", 0.0);
  sc.u = sj.value("u", 100);
  sc.codebook_seed = sj.value("codebook_seed", 1ull);
  sc.det.list_size = sj.value("list_size", 2);
  sc.det.threshold_mode =
      sj.value("threshold_mode", std::string("corollary")) == std::string("list")
          ? ThresholdMode::kListPosterior
          : ThresholdMode::kCorollary;
  sc.det.fixed_threshold = sj.value("fixed_threshold", 0.0);
  sc.det.crc_width = sj.value("crc_width", 16);
  sc.det.min_tau_fraction = sj.value("min_tau_fraction", 0.2);
  return sc;
}

CommandResult run_scenarios(const json& cfg, long long trials, uint64_t seed,
                            int workers, bool crc_only) {
  CommandResult res;
  res.columns = {"scenario_id", "detector",   "k",
                 "n",           "snr_db",     "ell",
                 "trials",      "error_rate", "ci_halfwidth",
                 "mean_stop_fraction"};
  for (const json& sj : cfg.at("scenarios")) {
    const Scenario sc = parse_scenario(sj);
    if (crc_only && sc.kind != DetectorKind::kCrcGenie)
      throw std::domain_error("crc command expects crc scenarios");
    if (!crc_only && sc.kind == DetectorKind::kCrcGenie)
      throw std::domain_error("msprt command expects msprt or wald scenarios");
    const LatencyReport rep = run_campaign(sc, trials, seed, workers);
    json row;
    row["scenario_id"] = sc.id;
    row["detector"] = sj.at("kind").get<std::string>();
    row["k"] = sc.k;
    row["n"] = sc.n;
    // per-channel-use SNR after Eb/N0 or sync-target conversion
    row["snr_db"] = 10.0 * std::log10(scenario_rho(sc));
    row["ell"] = sc.kind == DetectorKind::kCrcGenie ? sc.det.crc_width
                                                    : sc.det.list_size;
    row["trials"] = rep.trials;
    row["error_rate"] = rep.error_rate;
    row["ci_halfwidth"] = rep.confidence_halfwidth;
    row["mean_stop_fraction"] = rep.mean_stop_fraction;
    res.rows.push_back(std::move(row));
    ++res.feasible;
  }
  return res;
}

// ---- ofdm: pairwise distance curves and linearization summary -----------

CommandResult cmd_ofdm(const json& cfg) {
  CommandResult res;
  res.columns = {"pair_id", "t_over_T", "d_sq", "precoder"};
  const json& cj = cfg.at("codebook");
  const Codebook cb =
      neighbor_codebook(cj.at("n").get<int>(), cj.at("k").get<int>(),
                        cj.at("rho").get<double>(), cj.at("seed").get<uint64_t>());
  OfdmConfig ocfg;
  ocfg.n_subcarriers = cb.n;
  ocfg.symbol_duration = cfg.value("symbol_time", 1.0);
  ocfg.time_grid = cfg.value("time_grid", 256);

  res.summary = json::array();
  for (const json& pj : cfg.at("precoders")) {
    const std::string name = pj.get<std::string>();
    PrecoderKind kind;
    if (name == "identity")
      kind = PrecoderKind::kIdentity;
    else if (name == "sylvester")
      kind = PrecoderKind::kHadamardSylvester;
    else if (name == "dft")
      kind = PrecoderKind::kDftMatrix;
    else
      throw std::domain_error("unknown precoder: " + name);
    const Precoder pre = make_precoder(kind, cb.n, cfg.value("precoder_seed", 0ull));

    double max_dev = 0.0, sum_dev = 0.0;
    json devs = json::object();
    for (const json& pair : cfg.at("pairs")) {
      const long long a = pair.at(0).get<long long>();
      const long long b = pair.at(1).get<long long>();
      const std::string pair_id = std::to_string(a) + "-" + std::to_string(b);
      const DistanceCurve curve =
          distance_curve(complex_codeword(cb, a), complex_codeword(cb, b), ocfg, pre);
      for (size_t g = 0; g < curve.t_over_t.size(); ++g) {
        json row;
        row["pair_id"] = pair_id;
        row["t_over_T"] = curve.t_over_t[g];
        row["d_sq"] = curve.d_sq[g];
        row["precoder"] = name;
        res.rows.push_back(std::move(row));
        ++res.feasible;
      }
      const double dev = linearity_deviation(curve);
      devs[pair_id] = dev;
      max_dev = std::max(max_dev, dev);
      sum_dev += dev;
    }
    json entry;
    entry["precoder"] = name;
    entry["max_deviation"] = max_dev;
    entry["mean_deviation"] = sum_dev / cfg.at("pairs").size();
    entry["pair_deviations"] = devs;
    res.summary.push_back(std::move(entry));
  }
  return res;
}

// ---- multihop: strategy comparison over k grid x SNR set ----------------

CommandResult cmd_multihop(const json& cfg) {
  CommandResult res;
  res.columns = {"strategy", "h",   "q",           "k",
                 "snr_db",   "eps", "latency_symbols", "latency_normalized"};
  const double eps = cfg.at("eps").get<double>();
  const double t = cfg.value("symbol_time", 1.0);
  const int hops = cfg.value("hops", 2);
  for (const json& s : cfg.at("snr_db")) {
    const double snr_db = s.get<double>();
    const double power = db_to_linear(snr_db);
    for (const json& kj : cfg.at("k_grid")) {
      const double k = kj.get<double>();
      for (const StrategyRow& r : compare_strategies(k, power, t, eps, hops)) {
        json row;
        row["strategy"] = r.strategy;
        row["h"] = hops;
        row["q"] = r.parts;
        row["k"] = k;
        row["snr_db"] = snr_db;
        row["eps"] = eps;
        if (r.feasible) {
          row["latency_symbols"] = r.latency_symbols;
          row["latency_normalized"] = r.latency_normalized;
          ++res.feasible;
        } else {
          row["latency_symbols"] = nullptr;
          row["latency_normalized"] = nullptr;
        }
        res.rows.push_back(std::move(row));
      }
    }
  }
  return res;
}

int run(const std::string& command, const RunOptions& opt) {
  std::ifstream in(opt.config_path);
  if (!in) {
    std::cerr << "latlab: cannot read config " << opt.config_path << "\n";
    return 1;
  }
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    std::cerr << "latlab: bad config: " << e.what() << "\n";
    return 1;
  }

  try {
    if (opt.seed >= 0) cfg["seed"] = opt.seed;
    if (opt.trials >= 0) cfg["trials"] = opt.trials;
    if (opt.workers >= 0) cfg["workers"] = opt.workers;
    const uint64_t seed = static_cast<uint64_t>(effective(cfg, "seed", -1, 1));
    const long long trials = effective(cfg, "trials", -1, 2000);
    const int workers = static_cast<int>(effective(cfg, "workers", -1, 1));
    cfg["seed"] = seed;

    CommandResult res;
    if (command == "bounds")
      res = cmd_bounds(cfg);
    else if (command == "early-latency")
      res = cmd_early_latency(cfg);
    else if (command == "msprt")
      res = run_scenarios(cfg, trials, seed, workers, false);
    else if (command == "crc")
      res = run_scenarios(cfg, trials, seed, workers, true);
    else if (command == "ofdm")
      res = cmd_ofdm(cfg);
    else
      res = cmd_multihop(cfg);

    if (res.feasible == 0) {
      std::cerr << "latlab: no feasible cells in this scenario\n";
      return 2;
    }
    emit(res, command, cfg, opt);
    return 0;
  } catch (const InfeasibleError& e) {
    std::cerr << "latlab: infeasible scenario: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "latlab: bad config: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "latlab: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-blocklength latency laboratory"};
  app.require_subcommand(1);

  RunOptions opt;
  const char* names[] = {"bounds", "early-latency", "msprt",
                         "crc",    "ofdm",          "multihop"};
  const char* descs[] = {
      "minimum latency over an information-size grid",
      "normalized expected stopping time of optimal early detection",
      "list-detector stopping-time campaigns",
      "crc-gated stopping-time campaigns",
      "pairwise distance curves and linearization metrics",
      "relaying strategy comparison over hops and splits"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", opt.config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", opt.seed, "override config seed");
    sub->add_option("--trials", opt.trials, "override config trials");
    sub->add_option("--workers", opt.workers, "override config workers");
    sub->add_option("--out", opt.out_path, "output path (default stdout)");
    sub->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  return run(app.get_subcommands().front()->get_name(), opt);
}
