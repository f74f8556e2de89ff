#pragma once

#include <optional>

namespace fdwifi::link {

// Half-duplex powers of the two nodes of a link, the full-duplex time share
// of node 1 and the network-wide instantaneous power cap.
struct PowerConfig {
  double p_hd_node1_dbm = 8.0;
  double p_hd_node2_dbm = 8.0;
  double beta = 0.5;
  double pi_cap_dbm = 8.0;
  void validate() const;
};

struct FdPowers {
  double p1_dbm;
  double p2_dbm;  // -inf when node 2 never transmits (beta == 1)
};

// Energy-matched full-duplex powers. Throws if they exceed the cap together.
FdPowers fd_powers(const PowerConfig& cfg);

double free_space_path_loss(double distance_m, double freq_hz);

struct LinkBudget {
  double tx_power_dbm = 9.0;
  double path_loss_db = 63.0;
  double noise_floor_dbm = -90.0;
  double total_cancellation_db = 85.0;
  // Replaces tx - path loss as the received signal level when set.
  std::optional<double> rssi_override_dbm;
  void validate() const;
};

enum class Duplex { Half, Full };

double received_power_dbm(const LinkBudget& b);
// Residual self-interference at the receiver, -inf for infinite cancellation.
double residual_si_dbm(const LinkBudget& b);
// Self-interference is treated as extra noise in full duplex.
double sinr_chain(const LinkBudget& b, Duplex mode);

}  // namespace fdwifi::link
