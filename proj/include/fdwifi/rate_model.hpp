#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "fdwifi/rng.hpp"
#include "fdwifi/si_chain.hpp"

namespace fdwifi::rate {

using cplx = std::complex<double>;

struct PacketSymbols {
  std::vector<cplx> sent;
  std::vector<cplx> recovered;
};

// mean |s|^2 / mean |s - s_hat|^2; +inf when the packet is error free.
double per_packet_sinr(const PacketSymbols& pkt);

struct RateSample {
  std::vector<double> sinr_linear;
  double duplex_share = 1.0;  // fraction of airtime the node transmits
};

// duplex_share * mean log2(1 + sinr), bps/Hz
double ergodic_rate(const RateSample& s);

// Either a fixed total cancellation in dB (may be +inf) or a canceller whose
// total cancellation is drawn per packet.
using CancellationSource = std::variant<double, si::SiChainConfig>;

struct RateConfig {
  double hd_tx_power_dbm = 8.0;  // equals the network cap
  double beta = 0.5;
  double noise_floor_dbm = -90.0;
  // Scalar stand-ins for multi-antenna coding gains.
  double fd_array_gain_db = 0.0;
  double hd_array_gain_db = 0.0;
  void validate() const;
};

struct RateComparison {
  double er_fd = 0;  // per node, bps/Hz
  double er_hd = 0;  // per node, already scaled by the node's airtime share
};

// Monte-Carlo comparison at one grid point. `snr_db` is the received SNR of
// each system's own link; full duplex transmits at the energy-matched power
// and loses the residual self-interference as extra noise.
RateComparison fd_vs_hd_rates(double snr_db, const RateConfig& cfg,
                              const CancellationSource& cancellation, int n_packets, Rng& rng);

struct RatePoint {
  double snr_db;
  RateComparison rates;
};

// Every grid point uses the same random stream so the comparison across SNR
// sees the same cancellation draws.
std::vector<RatePoint> rate_sweep(const std::vector<double>& snr_grid_db, const RateConfig& cfg,
                                  const CancellationSource& cancellation, int n_packets,
                                  std::uint64_t seed);

}  // namespace fdwifi::rate
