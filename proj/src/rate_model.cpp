#include "fdwifi/rate_model.hpp"

#include <cmath>
#include <stdexcept>

#include "fdwifi/kernels.hpp"
#include "fdwifi/link_budget.hpp"
#include "fdwifi/units.hpp"

namespace fdwifi::rate {

double per_packet_sinr(const PacketSymbols& pkt) {
  if (pkt.sent.empty() || pkt.sent.size() != pkt.recovered.size())
    throw std::invalid_argument("packet symbols must be non-empty and of equal length");
  const auto& k = kernels::active();
  const double sig = k.energy(pkt.sent.data(), pkt.sent.size());
  const double err = k.diff_energy(pkt.sent.data(), pkt.recovered.data(), pkt.sent.size());
  if (err == 0.0) return kInf;
  return sig / err;
}

double ergodic_rate(const RateSample& s) {
  if (s.sinr_linear.empty()) throw std::invalid_argument("no rate samples");
  if (!(s.duplex_share > 0 && s.duplex_share <= 1))
    throw std::invalid_argument("duplex_share must lie in (0, 1]");
  double acc = 0;
  for (double g : s.sinr_linear) {
    if (g < 0) throw std::invalid_argument("negative SINR sample");
    acc += std::log2(1.0 + g);
  }
  return s.duplex_share * acc / static_cast<double>(s.sinr_linear.size());
}

void RateConfig::validate() const {
  if (!(beta > 0 && beta <= 1)) throw std::invalid_argument("beta must lie in (0, 1]");
}

RateComparison fd_vs_hd_rates(double snr_db, const RateConfig& cfg,
                              const CancellationSource& cancellation, int n_packets, Rng& rng) {
  cfg.validate();
  if (n_packets <= 0) throw std::invalid_argument("n_packets must be positive");
  const auto p = link::fd_powers({cfg.hd_tx_power_dbm, cfg.hd_tx_power_dbm, cfg.beta,
                                  cfg.hd_tx_power_dbm});

  // Both links are pinned to the same received level so the only
  // difference between them is the residual self-interference.
  link::LinkBudget hd;
  hd.tx_power_dbm = cfg.hd_tx_power_dbm;
  hd.noise_floor_dbm = cfg.noise_floor_dbm;
  hd.path_loss_db = std::max(0.0, cfg.hd_tx_power_dbm - cfg.noise_floor_dbm - snr_db);
  hd.rssi_override_dbm = cfg.noise_floor_dbm + snr_db;
  link::LinkBudget fd = hd;
  fd.tx_power_dbm = p.p1_dbm;

  RateSample fd_s{{}, 1.0};
  RateSample hd_s{{}, cfg.beta};
  fd_s.sinr_linear.reserve(n_packets);
  hd_s.sinr_linear.reserve(n_packets);
  for (int i = 0; i < n_packets; ++i) {
    if (const double* fixed = std::get_if<double>(&cancellation)) {
      fd.total_cancellation_db = *fixed;
    } else {
      fd.total_cancellation_db =
          std::max(0.0, si::run_chain(std::get<si::SiChainConfig>(cancellation), rng).total_db);
    }
    fd_s.sinr_linear.push_back(
        db_to_linear(link::sinr_chain(fd, link::Duplex::Full) + cfg.fd_array_gain_db));
    hd_s.sinr_linear.push_back(
        db_to_linear(link::sinr_chain(hd, link::Duplex::Half) + cfg.hd_array_gain_db));
  }
  return {ergodic_rate(fd_s), ergodic_rate(hd_s)};
}

std::vector<RatePoint> rate_sweep(const std::vector<double>& snr_grid_db, const RateConfig& cfg,
                                  const CancellationSource& cancellation, int n_packets,
                                  std::uint64_t seed) {
  std::vector<RatePoint> out;
  for (double snr : snr_grid_db) {
    Rng rng(mix_seed(seed, 0));
    out.push_back({snr, fd_vs_hd_rates(snr, cfg, cancellation, n_packets, rng)});
  }
  return out;
}

}  // namespace fdwifi::rate
