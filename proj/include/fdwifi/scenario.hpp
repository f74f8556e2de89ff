#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fdwifi/mac_engine.hpp"
#include "fdwifi/si_chain.hpp"

namespace fdwifi {

// Raised for unknown keys and bad values; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& msg)
      : std::runtime_error(key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class HdKind { Legacy, Modified };
enum class CancellationMode { Fixed, Sampled };
enum class Access { Contention, Scheduled };

struct ScenarioConfig {
  std::string id = "run";

  int n_fd = 1;
  int n_hd = 0;
  HdKind hd_kind = HdKind::Legacy;

  bool rts_cts = true;
  mac::Politeness politeness = mac::Politeness::Standard;
  Access access = Access::Contention;

  double tx_power_dbm = 9.0;
  double distance_m = 14.0;
  double freq_hz = 2.4e9;
  double noise_floor_dbm = -90.0;
  std::optional<double> rssi_override_dbm;
  double cancellation_db = 85.0;
  CancellationMode cancellation_mode = CancellationMode::Fixed;
  int rate_mbps = 18;

  std::uint32_t uplink_bytes = 1500;
  std::uint32_t downlink_bytes = 1500;
  std::uint64_t buffer_kb = 25600;
  bool traffic = true;

  double sim_time_s = 10.0;
  std::uint64_t seed = 1;

  // Cancellation-chain and rate-report knobs.
  double si_passive_db = 70.0;
  int si_multipath_taps = 4;
  int si_samples = 1000;
  double rates_snr_min_db = 0.0;
  double rates_snr_max_db = 40.0;
  double rates_snr_step_db = 5.0;
  int rates_packets = 2000;
  double rates_beta = 0.5;
  double rates_hd_tx_power_dbm = 8.0;

  void validate() const;
  // Short label of the node population and MAC rules, e.g. "fd", "hd-rts".
  std::string variant() const;
  si::SiChainConfig si_config() const;
};

// Flat `key = value` lines; '#' starts a comment. Unset keys keep defaults.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);

// Every key with its effective value; parse_scenario reads it back.
std::string config_text(const ScenarioConfig& cfg);

struct LinkNumbers {
  double path_loss_db;
  double hd_sinr_db;
  double fd_sinr_db;
};
LinkNumbers link_numbers(const ScenarioConfig& cfg);

mac::EngineSetup engine_setup(const ScenarioConfig& cfg);

struct RunResult {
  ScenarioConfig config;
  mac::MetricsReport report;
};

RunResult run_scenario(const ScenarioConfig& cfg);

}  // namespace fdwifi
