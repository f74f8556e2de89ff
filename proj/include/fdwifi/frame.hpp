#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>

#include "fdwifi/rng.hpp"
#include "fdwifi/units.hpp"

namespace fdwifi::mac {

using NodeId = int;

enum class FrameKind { Rts, Cts, Data, FdData, Ack };

std::string_view to_string(FrameKind k);

struct Frame {
  FrameKind kind = FrameKind::Data;
  NodeId src = 0;
  NodeId dst = 0;
  Nanos nav = 0;  // reservation past the end of this frame
  std::uint32_t payload_bytes = 0;
  Nanos duration = 0;
  std::uint64_t packet_seq = 0;  // data frames only
  std::uint64_t id = 0;          // assigned by the engine

  bool is_data() const { return kind == FrameKind::Data || kind == FrameKind::FdData; }
  void validate() const;
};

constexpr std::uint32_t kMaxPayloadBytes = 1500;

struct PhyParams {
  int preamble_us = 20;
  int symbol_us = 4;
  int service_tail_bits = 22;
  int mac_header_bytes = 28;
  // Control frame sizes used when no override exists.
  int rts_bytes = 20;
  int cts_bytes = 14;
  int ack_bytes = 14;
  std::map<FrameKind, int> duration_override_us{
      {FrameKind::Rts, 36}, {FrameKind::Cts, 32}, {FrameKind::Ack, 32}};
  void validate() const;
};

enum class Modulation { Bpsk, Qpsk, Qam16, Qam64 };

bool rate_supported(int rate_mbps);
Modulation modulation_for_rate(int rate_mbps);
int data_bits_per_symbol(int rate_mbps);

// Bytes on air that the bit error probability applies to.
int frame_bytes(FrameKind kind, std::uint32_t payload_bytes, const PhyParams& phy);

Nanos frame_duration(FrameKind kind, std::uint32_t payload_bytes, int rate_mbps,
                     const PhyParams& phy);

// Uncoded bit error probability at per-bit SNR gamma_b (linear).
double bit_error_prob(Modulation m, double gamma_b);

// Packet error probability for a frame received at `sinr_db`; per-bit SNR
// is SINR * bandwidth / bit rate.
double packet_error_prob(const Frame& f, double sinr_db, int rate_mbps, const PhyParams& phy,
                         double bandwidth_hz = 20e6);

enum class RxResult { Delivered, Corrupted };

RxResult channel_error(const Frame& f, double sinr_db, int rate_mbps, const PhyParams& phy,
                       Rng& rng, double bandwidth_hz = 20e6);

// Interval [start, end) on the shared medium.
struct Transmission {
  Frame frame;
  Nanos start = 0;
  Nanos end = 0;
};

enum class MediumOutcome { Clean, Collided, SelfDecodable };

struct ReceiverView {
  NodeId id = 0;
  std::optional<NodeId> fd_partner;  // set while a full-duplex exchange is open
  Nanos nav_end = 0;
};

// Outcome of `target` at `rx`, judged against every other transmission in
// `medium` (the target itself may be included and is skipped by frame id).
MediumOutcome medium_resolve(const Transmission& target, std::span<const Transmission> medium,
                             const ReceiverView& rx);

struct MacParams {
  PhyParams phy;
  int rate_mbps = 18;
  Nanos slot = micros(9);
  Nanos sifs = micros(16);
  Nanos difs = micros(34);
  int cw_min = 15;
  int cw_max = 1023;
  int short_retry_limit = 7;  // RTS, and data sent without RTS
  int long_retry_limit = 4;   // data sent after a CTS

  Nanos eifs() const;
  Nanos duration(FrameKind k, std::uint32_t payload = 0) const {
    return frame_duration(k, payload, rate_mbps, phy);
  }
  // Response must have fully arrived by end + SIFS + response + slot.
  Nanos response_timeout(FrameKind response) const {
    return sifs + duration(response) + slot;
  }
  void validate() const;
};

}  // namespace fdwifi::mac
