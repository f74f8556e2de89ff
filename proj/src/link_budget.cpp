#include "fdwifi/link_budget.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fdwifi/units.hpp"

namespace fdwifi::link {

void PowerConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
  if (p_hd_node1_dbm > pi_cap_dbm || p_hd_node2_dbm > pi_cap_dbm)
    throw std::invalid_argument("half-duplex power exceeds the network cap");
}

FdPowers fd_powers(const PowerConfig& cfg) {
  cfg.validate();
  FdPowers p{cfg.p_hd_node1_dbm + 10.0 * std::log10(cfg.beta), -kInf};
  if (cfg.beta < 1.0) p.p2_dbm = cfg.p_hd_node2_dbm + 10.0 * std::log10(1.0 - cfg.beta);
  const double sum = dbm_to_mw(p.p1_dbm) + dbm_to_mw(p.p2_dbm);
  const double cap = dbm_to_mw(cfg.pi_cap_dbm);
  if (sum > cap * (1.0 + 1e-12))
    throw std::domain_error("full-duplex powers exceed the network cap");
  return p;
}

double free_space_path_loss(double distance_m, double freq_hz) {
  if (!(distance_m > 0) || !(freq_hz > 0))
    throw std::invalid_argument("distance and frequency must be positive");
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * freq_hz / kSpeedOfLight);
}

void LinkBudget::validate() const {
  if (path_loss_db < 0) throw std::invalid_argument("path_loss_db must be >= 0");
  if (total_cancellation_db < 0) throw std::invalid_argument("total_cancellation_db must be >= 0");
}

double received_power_dbm(const LinkBudget& b) {
  return b.rssi_override_dbm ? *b.rssi_override_dbm : b.tx_power_dbm - b.path_loss_db;
}

double residual_si_dbm(const LinkBudget& b) {
  if (b.total_cancellation_db == kInf) return -kInf;
  return b.tx_power_dbm - b.total_cancellation_db;
}

double sinr_chain(const LinkBudget& b, Duplex mode) {
  b.validate();
  const double signal = received_power_dbm(b);
  if (mode == Duplex::Half) return signal - b.noise_floor_dbm;
  const double si = residual_si_dbm(b);
  if (si == -kInf) return signal - b.noise_floor_dbm;
  return signal - mw_to_dbm(dbm_to_mw(si) + dbm_to_mw(b.noise_floor_dbm));
}

}  // namespace fdwifi::link
