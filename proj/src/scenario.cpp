#include "fdwifi/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "fdwifi/link_budget.hpp"

namespace fdwifi {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || std::isnan(out)) throw ConfigError(key, "not a number: '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key, "not an integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "not a boolean: '" + v + "'");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

template <class T>
T in_range(const std::string& key, T v, T lo, T hi) {
  if (v < lo || v > hi)
    throw ConfigError(key, "out of range [" + fmt(static_cast<double>(lo)) + ", " +
                               fmt(static_cast<double>(hi)) + "]");
  return v;
}

struct Field {
  const char* key;
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define FD_DOUBLE(KEY, MEMBER, LO, HI)                                              \
  Field {                                                                           \
    KEY, [](ScenarioConfig& c, const std::string& k, const std::string& v) {        \
      c.MEMBER = in_range(k, to_double(k, v), double(LO), double(HI));              \
    },                                                                              \
        [](const ScenarioConfig& c) { return fmt(c.MEMBER); }                       \
  }
#define FD_INT(KEY, MEMBER, LO, HI)                                                 \
  Field {                                                                           \
    KEY, [](ScenarioConfig& c, const std::string& k, const std::string& v) {        \
      c.MEMBER = static_cast<decltype(c.MEMBER)>(                                   \
          in_range<long long>(k, to_int(k, v), LO, HI));                            \
    },                                                                              \
        [](const ScenarioConfig& c) { return std::to_string(c.MEMBER); }            \
  }
#define FD_BOOL(KEY, MEMBER)                                                        \
  Field {                                                                           \
    KEY, [](ScenarioConfig& c, const std::string& k, const std::string& v) {        \
      c.MEMBER = to_bool(k, v);                                                     \
    },                                                                              \
        [](const ScenarioConfig& c) { return std::string(c.MEMBER ? "true" : "false"); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"scenario.id",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         if (v.empty() || v.find_first_of(", \t\"") != std::string::npos)
           throw ConfigError(k, "must be non-empty without commas, quotes or blanks");
         c.id = v;
       },
       [](const ScenarioConfig& c) { return c.id; }},
      FD_INT("nodes.fd", n_fd, 0, 64),
      FD_INT("nodes.hd", n_hd, 0, 64),
      {"nodes.hd_kind",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         if (v == "legacy") c.hd_kind = HdKind::Legacy;
         else if (v == "modified") c.hd_kind = HdKind::Modified;
         else throw ConfigError(k, "expected legacy or modified");
       },
       [](const ScenarioConfig& c) {
         return std::string(c.hd_kind == HdKind::Legacy ? "legacy" : "modified");
       }},
      FD_BOOL("mac.rts_cts", rts_cts),
      {"mac.politeness",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         if (v == "standard") c.politeness = mac::Politeness::Standard;
         else if (v == "polite") c.politeness = mac::Politeness::PoliteEifs;
         else throw ConfigError(k, "expected standard or polite");
       },
       [](const ScenarioConfig& c) {
         return std::string(c.politeness == mac::Politeness::Standard ? "standard" : "polite");
       }},
      {"mac.access",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         if (v == "contention") c.access = Access::Contention;
         else if (v == "scheduled") c.access = Access::Scheduled;
         else throw ConfigError(k, "expected contention or scheduled");
       },
       [](const ScenarioConfig& c) {
         return std::string(c.access == Access::Contention ? "contention" : "scheduled");
       }},
      FD_DOUBLE("phy.tx_power_dbm", tx_power_dbm, -30, 40),
      FD_DOUBLE("phy.distance_m", distance_m, 0.01, 1e5),
      FD_DOUBLE("phy.freq_hz", freq_hz, 1e6, 1e11),
      FD_DOUBLE("phy.noise_floor_dbm", noise_floor_dbm, -200, 0),
      {"phy.rssi_override_dbm",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         if (v == "none") c.rssi_override_dbm.reset();
         else c.rssi_override_dbm = in_range(k, to_double(k, v), -200.0, 40.0);
       },
       [](const ScenarioConfig& c) {
         return c.rssi_override_dbm ? fmt(*c.rssi_override_dbm) : std::string("none");
       }},
      FD_DOUBLE("phy.cancellation_db", cancellation_db, 0, INFINITY),
      {"phy.cancellation_mode",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         if (v == "fixed") c.cancellation_mode = CancellationMode::Fixed;
         else if (v == "sampled") c.cancellation_mode = CancellationMode::Sampled;
         else throw ConfigError(k, "expected fixed or sampled");
       },
       [](const ScenarioConfig& c) {
         return std::string(c.cancellation_mode == CancellationMode::Fixed ? "fixed" : "sampled");
       }},
      {"phy.rate_mbps",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         const auto r = to_int(k, v);
         if (!mac::rate_supported(static_cast<int>(r)))
           throw ConfigError(k, "unsupported rate (6, 9, 12, 18, 24, 36, 48, 54)");
         c.rate_mbps = static_cast<int>(r);
       },
       [](const ScenarioConfig& c) { return std::to_string(c.rate_mbps); }},
      FD_INT("traffic.uplink_bytes", uplink_bytes, 0, 1500),
      FD_INT("traffic.downlink_bytes", downlink_bytes, 0, 1500),
      FD_INT("traffic.buffer_kb", buffer_kb, 2, 1 << 22),
      FD_BOOL("traffic.enabled", traffic),
      FD_DOUBLE("sim.time_s", sim_time_s, 1e-3, 3600),
      {"sim.seed",
       [](ScenarioConfig& c, const std::string& k, const std::string& v) {
         std::uint64_t out = 0;
         auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
         if (ec != std::errc() || p != v.data() + v.size())
           throw ConfigError(k, "not an unsigned integer: '" + v + "'");
         c.seed = out;
       },
       [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
      FD_DOUBLE("si.passive_db", si_passive_db, 0, 200),
      FD_INT("si.multipath_taps", si_multipath_taps, 0, 32),
      FD_INT("si.samples", si_samples, 1, 1000000),
      FD_DOUBLE("rates.snr_min_db", rates_snr_min_db, -20, 80),
      FD_DOUBLE("rates.snr_max_db", rates_snr_max_db, -20, 80),
      FD_DOUBLE("rates.snr_step_db", rates_snr_step_db, 0.1, 100),
      FD_INT("rates.packets", rates_packets, 1, 10000000),
      FD_DOUBLE("rates.beta", rates_beta, 1e-6, 1),
      FD_DOUBLE("rates.hd_tx_power_dbm", rates_hd_tx_power_dbm, -30, 40),
  };
  return f;
}

#undef FD_DOUBLE
#undef FD_INT
#undef FD_BOOL

// Short spellings accepted on input.
std::string canonical_key(const std::string& k) {
  if (k == "cancellation") return "phy.cancellation_db";
  if (k == "seed") return "sim.seed";
  return k;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (traffic && n_fd + n_hd < 1) throw ConfigError("nodes.fd", "need at least one station");
  if (n_fd > 0 && !rts_cts)
    throw ConfigError("mac.rts_cts", "full-duplex stations need the RTS/CTS handshake");
  if (rates_snr_max_db < rates_snr_min_db)
    throw ConfigError("rates.snr_max_db", "below rates.snr_min_db");
  if (buffer_kb * 1024 < downlink_bytes)
    throw ConfigError("traffic.buffer_kb", "smaller than one downlink packet");
}

std::string ScenarioConfig::variant() const {
  std::string v;
  if (n_hd == 0)
    v = "fd";
  else if (n_fd == 0)
    v = rts_cts ? "hd-rts" : "hd-basic";
  else
    v = hd_kind == HdKind::Legacy ? "mixed-legacy" : "mixed-modified";
  if (politeness == mac::Politeness::PoliteEifs) v += "-polite";
  if (access == Access::Scheduled) v += "-sched";
  return v;
}

si::SiChainConfig ScenarioConfig::si_config() const {
  si::SiChainConfig c;
  c.passive_suppression_db = si_passive_db;
  c.n_multipath = si_multipath_taps;
  c.seed = mix_seed(seed, 7);
  return c;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = canonical_key(trim(std::string_view(t).substr(0, eq)));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    bool found = false;
    for (const auto& f : fields()) {
      if (key == f.key) {
        f.set(cfg, key, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError(key, "unknown key");
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string config_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

LinkNumbers link_numbers(const ScenarioConfig& cfg) {
  link::LinkBudget b;
  b.tx_power_dbm = cfg.tx_power_dbm;
  b.path_loss_db = link::free_space_path_loss(cfg.distance_m, cfg.freq_hz);
  b.noise_floor_dbm = cfg.noise_floor_dbm;
  b.total_cancellation_db = cfg.cancellation_db;
  b.rssi_override_dbm = cfg.rssi_override_dbm;
  return {b.path_loss_db, link::sinr_chain(b, link::Duplex::Half),
          link::sinr_chain(b, link::Duplex::Full)};
}

mac::EngineSetup engine_setup(const ScenarioConfig& cfg) {
  cfg.validate();
  mac::EngineSetup s;
  s.params.rate_mbps = cfg.rate_mbps;
  s.nodes.push_back(mac::NodeKind::AccessPoint);
  for (int i = 0; i < cfg.n_fd; ++i) s.nodes.push_back(mac::NodeKind::FdStation);
  const auto hd = cfg.hd_kind == HdKind::Legacy ? mac::NodeKind::HdLegacyStation
                                                : mac::NodeKind::HdModifiedStation;
  for (int i = 0; i < cfg.n_hd; ++i) s.nodes.push_back(hd);
  s.ap_full_duplex = cfg.n_fd > 0;
  s.politeness = cfg.politeness;
  s.use_rts = cfg.rts_cts;
  s.uplink_bytes = cfg.uplink_bytes;
  s.downlink_bytes = cfg.downlink_bytes;
  s.buffer_bytes = cfg.buffer_kb * 1024;
  s.traffic = cfg.traffic;
  s.scheduled = cfg.access == Access::Scheduled;
  s.until = seconds(cfg.sim_time_s);
  s.seed = cfg.seed;

  const LinkNumbers ln = link_numbers(cfg);
  s.link.hd_sinr_db = ln.hd_sinr_db;
  s.link.fd_sinr_db = ln.fd_sinr_db;
  if (cfg.cancellation_mode == CancellationMode::Sampled) {
    const auto samples = si::sample_chain(cfg.si_config(), cfg.si_samples);
    link::LinkBudget b;
    b.tx_power_dbm = cfg.tx_power_dbm;
    b.path_loss_db = ln.path_loss_db;
    b.noise_floor_dbm = cfg.noise_floor_dbm;
    b.rssi_override_dbm = cfg.rssi_override_dbm;
    for (const auto& c : samples) {
      b.total_cancellation_db = std::max(0.0, c.total_db);
      s.link.fd_sinr_samples_db.push_back(link::sinr_chain(b, link::Duplex::Full));
    }
  }
  return s;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  return {cfg, mac::run(engine_setup(cfg))};
}

}  // namespace fdwifi
