#include "fdwifi/si_chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "fdwifi/kernels.hpp"
#include "fdwifi/units.hpp"

namespace fdwifi::si {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<int> build_payload(int K) {
  std::vector<int> bins;
  if (K == 64) {
    for (int f = -26; f <= 26; ++f) {
      if (f == 0 || f == 7 || f == -7 || f == 21 || f == -21) continue;
      bins.push_back((f + K) % K);
    }
  } else {
    for (int k = 1; k < K; ++k) bins.push_back(k);
  }
  return bins;
}

std::vector<cplx> gather(std::span<const cplx> v, const std::vector<int>& bins) {
  std::vector<cplx> out;
  out.reserve(bins.size());
  for (int k : bins) out.push_back(v[k]);
  return out;
}

cplx unit_phase(Rng& rng) {
  const double th = std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(rng);
  return std::polar(1.0, th);
}

std::vector<cplx> qpsk_symbols(int K, Rng& rng) {
  std::vector<cplx> x(K);
  const double a = std::sqrt(0.5);
  for (auto& s : x) {
    const auto bits = rng();
    s = {(bits & 1) ? a : -a, (bits & 2) ? a : -a};
  }
  return x;
}

}  // namespace

const std::vector<int>& payload_bins(int K) {
  static std::mutex mu;
  static std::map<int, std::vector<int>> cache;
  require(K > 1, "subcarrier count must exceed 1");
  std::lock_guard lock(mu);
  auto it = cache.find(K);
  if (it == cache.end()) it = cache.emplace(K, build_payload(K)).first;
  return it->second;
}

void FreqChannel::validate() const {
  require(!gains.empty(), "channel has no subcarriers");
  for (const auto& g : gains)
    require(std::isfinite(g.real()) && std::isfinite(g.imag()), "channel gain not finite");
  for (int k : payload_bins(size()))
    require(gains[k] != cplx{}, "channel gain is zero on a payload subcarrier");
}

void WireChannel::validate() const {
  require(!gains.empty(), "wire channel has no subcarriers");
  const double m0 = std::abs(gains[0]);
  for (const auto& g : gains)
    require(std::abs(std::abs(g) - m0) <= 1e-9 * std::max(1.0, m0), "wire channel is not flat");
}

void SiChainConfig::validate() const {
  require(passive_suppression_db >= 0, "passive_suppression_db must be >= 0");
  require(n_multipath >= 0, "n_multipath must be >= 0");
  require(subcarriers > 1, "subcarriers must exceed 1");
  require(delay_decay_taps > 0, "delay_decay_taps must be > 0");
  require(error_coherence >= 0 && error_coherence <= 1, "error_coherence must lie in [0, 1]");
  require(!pilot_snr_db || !std::isnan(*pilot_snr_db), "pilot_snr_db is NaN");
}

FreqChannel synth_si_channel(const SiChainConfig& cfg, Rng& rng) {
  cfg.validate();
  const int K = cfg.subcarriers;
  FreqChannel h;
  const cplx direct = std::pow(10.0, -cfg.passive_suppression_db / 20.0) * unit_phase(rng);
  h.gains.assign(K, direct);
  if (cfg.n_multipath > 0) {
    std::vector<double> pdp(cfg.n_multipath);
    double total = 0;
    for (int l = 0; l < cfg.n_multipath; ++l) total += pdp[l] = std::exp(-l / cfg.delay_decay_taps);
    const double scale = db_to_linear(-cfg.multipath_loss_db) / total;
    for (int l = 0; l < cfg.n_multipath; ++l) {
      const cplx tap = std::sqrt(pdp[l] * scale) * cn01(rng);
      const int delay = l + 1;
      for (int k = 0; k < K; ++k)
        h.gains[k] += tap * std::polar(1.0, -2 * std::numbers::pi * k * delay / K);
    }
  }
  return h;
}

WireChannel make_wire(int K, double magnitude, Rng& rng) {
  require(K > 0 && magnitude > 0, "wire channel needs K > 0 and positive magnitude");
  return WireChannel{std::vector<cplx>(K, magnitude * unit_phase(rng))};
}

ChannelEstimate estimate_channel(std::span<const cplx> truth, double pilot_snr_db, Rng& rng,
                                 double coherence) {
  require(!std::isnan(pilot_snr_db) && pilot_snr_db != -kInf, "pilot SNR must be finite or +inf");
  require(coherence >= 0 && coherence <= 1, "coherence must lie in [0, 1]");
  ChannelEstimate e;
  e.gains.assign(truth.begin(), truth.end());
  e.error_variance.assign(truth.size(), 0.0);
  if (pilot_snr_db == kInf) return e;
  const double rel = db_to_linear(-pilot_snr_db);
  const double s = std::sqrt(rel);
  const cplx common = cn01(rng);
  const double a = std::sqrt(coherence);
  const double b = std::sqrt(1.0 - coherence);
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const cplx own = cn01(rng);
    e.gains[k] += truth[k] * s * (a * common + b * own);
    e.error_variance[k] = std::norm(truth[k]) * rel;
  }
  return e;
}

int center_payload_bin(int K) {
  const auto& bins = payload_bins(K);
  int best = bins.front();
  auto dist = [K](int k) { return std::min(k, K - k); };
  // Ties go to the positive-frequency side.
  for (int k : bins)
    if (dist(k) < dist(best) || (dist(k) == dist(best) && k < best)) best = k;
  return best;
}

CancellerCoeffs analog_coeffs(const ChannelEstimate& h_est, const ChannelEstimate& w_est,
                              CoeffMode mode) {
  const std::size_t K = h_est.gains.size();
  require(K == w_est.gains.size(), "estimate size mismatch");
  for (const auto& g : w_est.gains)
    if (g == cplx{}) throw std::domain_error("wire estimate has a zero gain");
  CancellerCoeffs b;
  b.mode = mode;
  b.coeffs.resize(K);
  kernels::active().divide(h_est.gains.data(), w_est.gains.data(), b.coeffs.data(), K);
  if (mode == CoeffMode::PerSubcarrier) return b;

  double mag = 0;
  const auto& bins = payload_bins(static_cast<int>(K));
  if (mode == CoeffMode::Ffc1) {
    for (int k : bins) mag += std::abs(b.coeffs[k]);
    mag /= static_cast<double>(bins.size());
  } else {
    mag = std::abs(b.coeffs[center_payload_bin(static_cast<int>(K))]);
  }
  for (auto& c : b.coeffs) c = std::polar(mag, std::arg(c));
  return b;
}

std::vector<cplx> residual_after_analog(std::span<const FreqChannel> h, const WireChannel& w,
                                        std::span<const CancellerCoeffs> b,
                                        std::span<const std::vector<cplx>> x) {
  if (h.empty() || h.size() != b.size() || h.size() != x.size())
    throw std::invalid_argument("antenna count mismatch");
  const std::size_t K = w.gains.size();
  std::vector<cplx> y(K);
  for (std::size_t m = 0; m < h.size(); ++m) {
    if (h[m].gains.size() != K || b[m].coeffs.size() != K || x[m].size() != K)
      throw std::invalid_argument("subcarrier count mismatch");
    kernels::active().residual_acc(h[m].gains.data(), w.gains.data(), b[m].coeffs.data(),
                                   x[m].data(), y.data(), K);
  }
  return y;
}

std::vector<cplx> digital_cancel(std::span<const cplx> y_ac,
                                 std::span<const ChannelEstimate> resid_est,
                                 std::span<const std::vector<cplx>> x) {
  if (resid_est.size() != x.size()) throw std::invalid_argument("antenna count mismatch");
  const std::size_t K = y_ac.size();
  std::vector<cplx> out(y_ac.begin(), y_ac.end());
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (resid_est[m].gains.size() != K || x[m].size() != K)
      throw std::invalid_argument("subcarrier count mismatch");
    kernels::active().sub_product(out.data(), resid_est[m].gains.data(), x[m].data(), out.data(),
                                  K);
  }
  return out;
}

double cancellation_db(double power_before, double power_after) {
  if (!(power_before > 0) || !(power_after > 0))
    throw std::domain_error("cancellation_db needs positive powers");
  return 10.0 * std::log10(power_before / power_after);
}

double p2p_metric(std::span<const cplx> values) {
  const auto& bins = payload_bins(static_cast<int>(values.size()));
  double lo = kInf, hi = 0;
  for (int k : bins) {
    const double p = std::norm(values[k]);
    if (p == 0) throw std::domain_error("zero coefficient on a payload subcarrier");
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return 10.0 * std::log10(hi / lo);
}

double payload_power(std::span<const cplx> v) {
  const auto& bins = payload_bins(static_cast<int>(v.size()));
  const auto g = gather(v, bins);
  return kernels::active().energy(g.data(), g.size()) / static_cast<double>(g.size());
}

double stage_pilot_snr_db(const SiChainConfig& cfg, double input_power, double dynamic_range_db) {
  if (cfg.pilot_snr_db) return *cfg.pilot_snr_db;
  const double noise_rel = db_to_linear(cfg.estimation_noise_dbm - cfg.tx_power_dbm);
  return -linear_to_db(noise_rel / input_power + db_to_linear(-dynamic_range_db));
}

ChainSample run_chain(const SiChainConfig& cfg, Rng& rng, const ChainOptions& opt) {
  const int K = cfg.subcarriers;
  const FreqChannel h = synth_si_channel(cfg, rng);
  const std::vector<cplx> x = qpsk_symbols(K, rng);
  const double p_ps = payload_power(h.gains);
  const WireChannel wire = make_wire(K, std::sqrt(p_ps), rng);

  ChainSample s;
  s.p2p_db = p2p_metric(h.gains);
  s.passive_db = -linear_to_db(p_ps);

  // Powers are relative to the transmitted symbols, which have unit modulus.
  std::vector<cplx> y_ac;
  FreqChannel resid;
  if (opt.analog) {
    const auto h_est =
        estimate_channel(h, stage_pilot_snr_db(cfg, p_ps, cfg.analog_dynamic_range_db), rng,
                         cfg.error_coherence);
    const auto w_est = estimate_channel(wire, cfg.wire_pilot_snr_db, rng, 1.0);
    const CancellerCoeffs b = analog_coeffs(h_est, w_est, opt.mode);
    y_ac = residual_after_analog(std::span(&h, 1), wire, std::span(&b, 1), std::span(&x, 1));
    resid.gains.resize(K);
    const std::vector<cplx> ones(K, cplx{1.0, 0.0});
    kernels::active().residual_acc(h.gains.data(), wire.gains.data(), b.coeffs.data(), ones.data(),
                                   resid.gains.data(), K);
  } else {
    const CancellerCoeffs off{std::vector<cplx>(K), opt.mode};
    y_ac = residual_after_analog(std::span(&h, 1), wire, std::span(&off, 1), std::span(&x, 1));
    resid = h;
  }
  const double p_ac = payload_power(y_ac);
  s.analog_db = cancellation_db(p_ps, p_ac);

  std::vector<cplx> z = y_ac;
  if (opt.digital) {
    const auto r_est =
        estimate_channel(resid, stage_pilot_snr_db(cfg, p_ac, cfg.digital_dynamic_range_db), rng,
                         cfg.error_coherence);
    z = digital_cancel(y_ac, std::span(&r_est, 1), std::span(&x, 1));
  }
  const double p_dc = payload_power(z);
  s.digital_db = cancellation_db(p_ac, p_dc);
  s.total_db = -linear_to_db(p_dc);
  return s;
}

std::vector<ChainSample> sample_chain(const SiChainConfig& cfg, int n, const ChainOptions& opt,
                                      int threads) {
  cfg.validate();
  require(n >= 0, "sample count must be >= 0");
  std::vector<ChainSample> out(n);
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      out[i] = run_chain(cfg, rng, opt);
    }
  };
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(1, n / 64));
  if (threads <= 1) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back(work, t * chunk, std::min(n, (t + 1) * chunk));
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace fdwifi::si
