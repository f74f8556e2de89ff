#include "fdwifi/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "fdwifi/analytics.hpp"
#include "fdwifi/rate_model.hpp"
#include "fdwifi/si_chain.hpp"

namespace fdwifi {

namespace {

using Table = std::vector<std::vector<std::string>>;

std::string render(const Table& t, Format f) {
  std::string out;
  if (f == Format::Csv) {
    for (const auto& row : t) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
      }
      out += '\n';
    }
    return out;
  }
  std::vector<std::size_t> w;
  for (const auto& row : t)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], row[i].size());
    }
  for (const auto& row : t) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += std::string(w[i] - row[i].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

ScenarioConfig point(const ScenarioConfig& base, std::size_t index, std::string id) {
  ScenarioConfig c = base;
  c.id = std::move(id);
  c.seed = mix_seed(base.seed, index);
  return c;
}

// The three reference MAC variants on a fixed population size.
void add_variants(std::vector<ScenarioConfig>& grid, const ScenarioConfig& base, int n,
                  const std::string& tag) {
  ScenarioConfig fd = point(base, grid.size(), tag + "-fd");
  fd.n_fd = n;
  fd.n_hd = 0;
  fd.rts_cts = true;
  grid.push_back(fd);
  ScenarioConfig rts = point(base, grid.size(), tag + "-hd-rts");
  rts.n_fd = 0;
  rts.n_hd = n;
  rts.rts_cts = true;
  grid.push_back(rts);
  ScenarioConfig basic = point(base, grid.size(), tag + "-hd-basic");
  basic.n_fd = 0;
  basic.n_hd = n;
  basic.rts_cts = false;
  grid.push_back(basic);
}

std::string theory_output(Format f) {
  using analytics::Fraction;
  using analytics::to_string;
  Table t{{"scenario", "n_fd", "n_hd", "sum", "hd_downlink", "fd_duplex", "hd_uplink"}};
  auto add = [&](const char* name, analytics::Population p, analytics::Scenario s) {
    const auto g = analytics::normalized_goodputs(p, s);
    t.push_back({name, std::to_string(p.n_fd), std::to_string(p.n_hd), to_string(g.sum),
                 to_string(g.hd_downlink), to_string(g.fd_duplex), to_string(g.hd_uplink)});
  };
  for (int n : {1, 2, 4, 8}) add("hd-only", {0, n}, analytics::Scenario::HdOnly);
  for (int n : {1, 2, 4, 8}) add("fd-only", {n, 0}, analytics::Scenario::FdOnly);
  for (int m : {1, 2, 4}) add("mixed", {m, m}, analytics::Scenario::MixedCase1);
  std::string out = render(t, f);
  Table g{{"n", "uplink_gain", "downlink_gain", "sum_gain"}};
  for (int n : {1, 2, 4, 8}) {
    const auto x = analytics::improvement_factors(n);
    g.push_back({std::to_string(n), to_string(x.uplink), to_string(x.downlink), to_string(x.sum)});
  }
  out += '\n';
  out += render(g, f);
  return out;
}

std::string rates_output(const ScenarioConfig& cfg, Format f) {
  std::vector<double> grid;
  for (double s = cfg.rates_snr_min_db; s <= cfg.rates_snr_max_db + 1e-9; s += cfg.rates_snr_step_db)
    grid.push_back(s);
  rate::RateConfig rc;
  rc.beta = cfg.rates_beta;
  rc.hd_tx_power_dbm = cfg.rates_hd_tx_power_dbm;
  rc.noise_floor_dbm = cfg.noise_floor_dbm;
  struct Chain {
    const char* name;
    rate::CancellationSource src;
  };
  si::SiChainConfig weak = si::weak_isolation_preset();
  weak.n_multipath = cfg.si_multipath_taps;
  const std::vector<Chain> chains = {
      {"calibrated", cfg.si_config()}, {"weak-isolation", weak}, {"infinite", kInf}};
  Table t{{"chain", "snr_db", "er_fd_bps_hz", "er_hd_bps_hz", "fd_over_hd"}};
  for (const auto& c : chains) {
    for (const auto& p : rate::rate_sweep(grid, rc, c.src, cfg.rates_packets, cfg.seed)) {
      t.push_back({c.name, fixed(p.snr_db, 1), fixed(p.rates.er_fd, 4), fixed(p.rates.er_hd, 4),
                   fixed(p.rates.er_hd > 0 ? p.rates.er_fd / p.rates.er_hd : 0.0, 4)});
    }
  }
  return render(t, f);
}

std::string cdf_output(const ScenarioConfig& cfg, Format f, int threads) {
  const auto samples = si::sample_chain(cfg.si_config(), cfg.si_samples, {}, threads);
  const std::size_t n = samples.size();
  std::vector<std::vector<double>> cols(5);
  for (const auto& s : samples) {
    cols[0].push_back(s.p2p_db);
    cols[1].push_back(s.passive_db);
    cols[2].push_back(s.analog_db);
    cols[3].push_back(s.digital_db);
    cols[4].push_back(s.total_db);
  }
  for (auto& c : cols) std::sort(c.begin(), c.end());
  Table t{{"cdf", "p2p_db", "passive_db", "analog_db", "digital_db", "total_db"}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{fixed(static_cast<double>(i + 1) / static_cast<double>(n), 4)};
    for (const auto& c : cols) row.push_back(fixed(c[i], 3));
    t.push_back(row);
  }
  return render(t, f);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Run, Command::SweepCancellation, Command::SweepPacketSize,
                    Command::SweepNodes, Command::Theory, Command::Rates, Command::CancelCdf})
    if (command_name(c) == name) return c;
  return std::nullopt;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Run: return "run";
    case Command::SweepCancellation: return "sweep-cancellation";
    case Command::SweepPacketSize: return "sweep-packetsize";
    case Command::SweepNodes: return "sweep-nodes";
    case Command::Theory: return "theory";
    case Command::Rates: return "rates";
    case Command::CancelCdf: return "cancel-cdf";
  }
  return "?";
}

std::vector<ScenarioConfig> nodes_grid(const ScenarioConfig& base) {
  std::vector<ScenarioConfig> grid;
  for (int n : {1, 2, 4, 8}) add_variants(grid, base, n, "n" + std::to_string(n));
  return grid;
}

std::vector<ScenarioConfig> packet_size_grid(const ScenarioConfig& base) {
  std::vector<ScenarioConfig> grid;
  const int n = std::max(1, base.n_fd + base.n_hd);
  for (std::uint32_t ul : {40u, 500u, 1000u, 1500u}) {
    ScenarioConfig b = base;
    b.uplink_bytes = ul;
    add_variants(grid, b, n, "ul" + std::to_string(ul));
  }
  return grid;
}

std::vector<ScenarioConfig> cancellation_grid(const ScenarioConfig& base) {
  std::vector<ScenarioConfig> grid;
  for (int rate : {6, 12, 18, 24, 36, 54}) {
    for (int canc = 50; canc <= 100; canc += 5) {
      ScenarioConfig c = point(base, grid.size(),
                               "c" + std::to_string(canc) + "-r" + std::to_string(rate));
      c.cancellation_db = canc;
      c.cancellation_mode = CancellationMode::Fixed;
      c.rate_mbps = rate;
      grid.push_back(c);
    }
  }
  return grid;
}

std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& cfgs, int threads) {
  std::vector<RunResult> out(cfgs.size());
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(cfgs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        out[i] = run_scenario(cfgs[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string command_output(Command c, const ScenarioConfig& cfg, Format format, int threads) {
  switch (c) {
    case Command::Run: return emit_report(run_scenario(cfg), format);
    case Command::SweepNodes: return emit_report(run_batch(nodes_grid(cfg), threads), format);
    case Command::SweepPacketSize:
      return emit_report(run_batch(packet_size_grid(cfg), threads), format);
    case Command::SweepCancellation:
      return emit_report(run_batch(cancellation_grid(cfg), threads), format);
    case Command::Theory: return theory_output(format);
    case Command::Rates: return rates_output(cfg, format);
    case Command::CancelCdf: return cdf_output(cfg, format, threads);
  }
  return {};
}

int run_command(Command c, const ScenarioConfig& cfg, const CommandOptions& opt, std::ostream& out,
                std::ostream& err) {
  std::string body;
  try {
    body = command_output(c, cfg, opt.format, opt.threads);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (opt.out_path.empty()) {
    out << body;
    return out ? 0 : 1;
  }
  std::ofstream f(opt.out_path, std::ios::binary);
  f << body;
  std::ofstream side(opt.out_path + ".config.txt", std::ios::binary);
  side << "# command " << command_name(c) << '\n' << config_text(cfg);
  if (!f || !side) {
    err << "error: cannot write " << opt.out_path << '\n';
    return 2;
  }
  return 0;
}

}  // namespace fdwifi
