#include "fdwifi/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdwifi::mac {

std::string_view to_string(FrameKind k) {
  switch (k) {
    case FrameKind::Rts: return "RTS";
    case FrameKind::Cts: return "CTS";
    case FrameKind::Data: return "DATA";
    case FrameKind::FdData: return "FDDATA";
    case FrameKind::Ack: return "ACK";
  }
  return "?";
}

void Frame::validate() const {
  if (duration <= 0) throw std::invalid_argument("frame duration must be positive");
  if (nav < 0) throw std::invalid_argument("frame NAV must be non-negative");
  if (payload_bytes > kMaxPayloadBytes) throw std::invalid_argument("payload exceeds 1500 bytes");
}

void PhyParams::validate() const {
  if (preamble_us <= 0 || symbol_us <= 0 || service_tail_bits <= 0 || mac_header_bytes <= 0)
    throw std::invalid_argument("PHY parameters must be positive");
  for (const auto& [k, us] : duration_override_us)
    if (us <= 0) throw std::invalid_argument("duration override must be positive");
}

bool rate_supported(int rate_mbps) {
  switch (rate_mbps) {
    case 6: case 9: case 12: case 18: case 24: case 36: case 48: case 54: return true;
    default: return false;
  }
}

Modulation modulation_for_rate(int rate_mbps) {
  if (!rate_supported(rate_mbps)) throw std::invalid_argument("unsupported rate");
  if (rate_mbps <= 9) return Modulation::Bpsk;
  if (rate_mbps <= 18) return Modulation::Qpsk;
  if (rate_mbps <= 36) return Modulation::Qam16;
  return Modulation::Qam64;
}

// 802.11a: 48 data subcarriers, 4 us symbols, so N_DBPS = 4 * Mbps.
int data_bits_per_symbol(int rate_mbps) {
  if (!rate_supported(rate_mbps)) throw std::invalid_argument("unsupported rate");
  return 4 * rate_mbps;
}

int frame_bytes(FrameKind kind, std::uint32_t payload_bytes, const PhyParams& phy) {
  switch (kind) {
    case FrameKind::Rts: return phy.rts_bytes;
    case FrameKind::Cts: return phy.cts_bytes;
    case FrameKind::Ack: return phy.ack_bytes;
    default: return phy.mac_header_bytes + static_cast<int>(payload_bytes);
  }
}

Nanos frame_duration(FrameKind kind, std::uint32_t payload_bytes, int rate_mbps,
                     const PhyParams& phy) {
  const int ndbps = data_bits_per_symbol(rate_mbps);
  if (auto it = phy.duration_override_us.find(kind); it != phy.duration_override_us.end())
    return micros(it->second);
  const int bits = phy.service_tail_bits + 8 * frame_bytes(kind, payload_bytes, phy);
  const int symbols = (bits + ndbps - 1) / ndbps;
  return micros(phy.preamble_us + phy.symbol_us * symbols);
}

double bit_error_prob(Modulation m, double gamma_b) {
  if (gamma_b <= 0) return 0.5;
  switch (m) {
    case Modulation::Bpsk:
    case Modulation::Qpsk:
      return qfunc(std::sqrt(2.0 * gamma_b));
    case Modulation::Qam16:
    case Modulation::Qam64: {
      const double M = m == Modulation::Qam16 ? 16.0 : 64.0;
      const double k = std::log2(M);
      const double p = 4.0 / k * (1.0 - 1.0 / std::sqrt(M)) *
                       qfunc(std::sqrt(3.0 * k * gamma_b / (M - 1.0)));
      return std::min(p, 0.5);
    }
  }
  return 0.5;
}

double packet_error_prob(const Frame& f, double sinr_db, int rate_mbps, const PhyParams& phy,
                         double bandwidth_hz) {
  const double gamma_b = db_to_linear(sinr_db) * bandwidth_hz / (rate_mbps * 1e6);
  const double p = bit_error_prob(modulation_for_rate(rate_mbps), gamma_b);
  if (p == 0.0) return 0.0;
  const int bits = 8 * frame_bytes(f.kind, f.payload_bytes, phy);
  // 1 - (1-p)^bits without cancellation for tiny p.
  return -std::expm1(bits * std::log1p(-p));
}

RxResult channel_error(const Frame& f, double sinr_db, int rate_mbps, const PhyParams& phy,
                       Rng& rng, double bandwidth_hz) {
  const double per = packet_error_prob(f, sinr_db, rate_mbps, phy, bandwidth_hz);
  if (per <= 0.0) return RxResult::Delivered;
  if (per >= 1.0) return RxResult::Corrupted;
  return uniform01(rng) < per ? RxResult::Corrupted : RxResult::Delivered;
}

MediumOutcome medium_resolve(const Transmission& target, std::span<const Transmission> medium,
                             const ReceiverView& rx) {
  bool own_overlap = false;
  for (const auto& t : medium) {
    if (t.frame.id == target.frame.id) continue;
    if (t.start >= target.end || target.start >= t.end) continue;
    if (t.frame.src == rx.id)
      own_overlap = true;
    else
      return MediumOutcome::Collided;
  }
  if (!own_overlap) return MediumOutcome::Clean;
  if (rx.fd_partner && *rx.fd_partner == target.frame.src && target.end <= rx.nav_end)
    return MediumOutcome::SelfDecodable;
  return MediumOutcome::Collided;
}

Nanos MacParams::eifs() const { return sifs + duration(FrameKind::Ack) + difs; }

void MacParams::validate() const {
  phy.validate();
  if (!rate_supported(rate_mbps)) throw std::invalid_argument("unsupported rate");
  if (slot <= 0 || sifs <= 0 || difs <= 0) throw std::invalid_argument("timings must be positive");
  if (cw_min < 1 || cw_max < cw_min) throw std::invalid_argument("invalid contention window");
  if (short_retry_limit < 1 || long_retry_limit < 1)
    throw std::invalid_argument("retry limits must be >= 1");
}

}  // namespace fdwifi::mac
