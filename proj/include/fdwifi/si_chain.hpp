#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fdwifi/rng.hpp"

namespace fdwifi::si {

using cplx = std::complex<double>;

// OFDM bins that carry data. For K = 64 these are the 48 802.11a data
// subcarriers (DC, pilots and guards excluded); for other K every bin but DC.
const std::vector<int>& payload_bins(int K);

// Self-interference channel seen by the receive chain, one gain per bin.
struct FreqChannel {
  std::vector<cplx> gains;
  int size() const { return static_cast<int>(gains.size()); }
  void validate() const;
};

// Cable path feeding the analog canceller; frequency flat.
struct WireChannel {
  std::vector<cplx> gains;
  int size() const { return static_cast<int>(gains.size()); }
  void validate() const;
};

struct ChannelEstimate {
  std::vector<cplx> gains;
  std::vector<double> error_variance;
};

enum class CoeffMode { PerSubcarrier, Ffc1, Ffc2 };

struct CancellerCoeffs {
  std::vector<cplx> coeffs;
  CoeffMode mode = CoeffMode::PerSubcarrier;
};

struct SiChainConfig {
  double passive_suppression_db = 70.0;
  int n_multipath = 4;
  // Fixed pilot SNR for both estimation rounds. When unset the SNR follows
  // from the received SI power against the estimation noise floor.
  std::optional<double> pilot_snr_db;
  std::uint64_t seed = 1;

  int subcarriers = 64;
  double multipath_loss_db = 77.0;    // total reflected power below tx
  double delay_decay_taps = 2.0;      // exponential power-delay profile
  double tx_power_dbm = 5.0;
  double estimation_noise_dbm = -83.0;
  double analog_dynamic_range_db = 15.0;   // caps first-round pilot SNR
  double digital_dynamic_range_db = 5.0;   // caps second-round pilot SNR
  double error_coherence = 0.7;  // share of estimation error common to all bins
  double wire_pilot_snr_db = 60.0;

  void validate() const;
};

FreqChannel synth_si_channel(const SiChainConfig& cfg, Rng& rng);

// Flat cable channel with random phase and magnitude `magnitude`.
WireChannel make_wire(int K, double magnitude, Rng& rng);

// estimate = truth + e, E|e[k]|^2 = |truth[k]|^2 * 10^(-snr/10). A fraction
// `coherence` of the error power is shared by all bins; the rest is iid.
ChannelEstimate estimate_channel(std::span<const cplx> truth, double pilot_snr_db, Rng& rng,
                                 double coherence = 0.0);
inline ChannelEstimate estimate_channel(const FreqChannel& truth, double pilot_snr_db, Rng& rng,
                                        double coherence = 0.0) {
  return estimate_channel(truth.gains, pilot_snr_db, rng, coherence);
}
inline ChannelEstimate estimate_channel(const WireChannel& truth, double pilot_snr_db, Rng& rng,
                                        double coherence = 0.0) {
  return estimate_channel(truth.gains, pilot_snr_db, rng, coherence);
}

// Bin used as the FFC2 magnitude reference: the payload bin closest to the
// band centre.
int center_payload_bin(int K);

CancellerCoeffs analog_coeffs(const ChannelEstimate& h_est, const ChannelEstimate& w_est,
                              CoeffMode mode);

// y[k] = sum_m (h_m[k] - w[k] b_m[k]) x_m[k]
std::vector<cplx> residual_after_analog(std::span<const FreqChannel> h, const WireChannel& w,
                                        std::span<const CancellerCoeffs> b,
                                        std::span<const std::vector<cplx>> x);

// y[k] - sum_m r_m[k] x_m[k]
std::vector<cplx> digital_cancel(std::span<const cplx> y_ac,
                                 std::span<const ChannelEstimate> resid_est,
                                 std::span<const std::vector<cplx>> x);

double cancellation_db(double power_before, double power_after);

double p2p_metric(std::span<const cplx> values);
inline double p2p_metric(const CancellerCoeffs& b) { return p2p_metric(b.coeffs); }

// Mean |v[k]|^2 over payload bins.
double payload_power(std::span<const cplx> v);

// Pilot SNR of an estimation round whose input has mean relative power
// `input_power` (linear, relative to tx), capped by `dynamic_range_db`.
double stage_pilot_snr_db(const SiChainConfig& cfg, double input_power, double dynamic_range_db);

struct ChainOptions {
  CoeffMode mode = CoeffMode::PerSubcarrier;
  bool analog = true;
  bool digital = true;
};

struct ChainSample {
  double p2p_db = 0;
  double passive_db = 0;
  double analog_db = 0;
  double digital_db = 0;
  double total_db = 0;
};

// One channel draw through the whole chain. Stage figures come from powers
// measured at each tap point.
ChainSample run_chain(const SiChainConfig& cfg, Rng& rng, const ChainOptions& opt = {});

// n independent draws; draw i uses a seed derived from (cfg.seed, i), so the
// result does not depend on `threads`.
std::vector<ChainSample> sample_chain(const SiChainConfig& cfg, int n, const ChainOptions& opt = {},
                                      int threads = 0);

}  // namespace fdwifi::si

namespace fdwifi::si {

// Same canceller behind a bare antenna pair with less passive isolation;
// total cancellation median lands near 78 dB.
inline SiChainConfig weak_isolation_preset() {
  SiChainConfig c;
  c.passive_suppression_db = 57.0;
  return c;
}

}  // namespace fdwifi::si
