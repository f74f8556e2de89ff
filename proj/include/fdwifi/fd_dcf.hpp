#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "fdwifi/frame.hpp"

namespace fdwifi::mac {

enum class NodeKind { AccessPoint, FdStation, HdLegacyStation, HdModifiedStation };
enum class Politeness { Standard, PoliteEifs };

std::string_view to_string(NodeKind k);

struct Packet {
  std::uint64_t seq = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t bytes = 0;
};

// Per-destination FIFOs sharing one global arrival order, so the overall
// head is the oldest packet while any destination's oldest packet can be
// pulled forward.
class TxQueue {
 public:
  explicit TxQueue(std::uint64_t capacity_bytes = 25600ull * 1024) : capacity_(capacity_bytes) {}

  bool fits(std::uint32_t bytes) const { return bytes_ + bytes <= capacity_; }
  // Returns false when the packet does not fit.
  bool push(const Packet& p);
  // Puts a packet taken out earlier back at its original position.
  void requeue(const Packet& p);
  std::optional<Packet> head() const;
  std::optional<Packet> pop_head();
  std::optional<Packet> take_first_for(NodeId dst);

  std::size_t size() const { return count_; }
  std::uint64_t bytes() const { return bytes_; }
  std::uint64_t capacity() const { return capacity_; }
  bool empty() const { return count_ == 0; }

 private:
  void remove_front(std::map<NodeId, std::deque<Packet>>::iterator it);

  std::map<NodeId, std::deque<Packet>> per_dst_;
  std::uint64_t capacity_;
  std::uint64_t bytes_ = 0;
  std::size_t count_ = 0;
};

// Oldest packet for the RTS sender, pulled ahead of older packets to others.
std::optional<Packet> ap_queue_select(TxQueue& queue, NodeId rts_sender);

enum class Observation { CleanFrameEnd, ErroneousFrameEnd, FdExchangeEnd, OwnAckReceived };

struct DeferenceContext {
  bool overheard_cts = false;
  bool within_nav = false;  // now is not past the NAV that CTS announced
};

enum class Wait { Difs, Eifs };

// `fd_aware` marks nodes that run the full-duplex MAC rules (full-duplex
// stations, modified half-duplex stations and a full-duplex access point).
Wait deference_policy(NodeKind kind, bool fd_aware, Politeness pol, Observation obs,
                      const DeferenceContext& ctx);

enum class Phase {
  Idle,
  Deferring,
  Backoff,
  TxRts,
  AwaitCts,
  TxData,
  AwaitAck,
  TxCts,
  TxFdData,
  TxAck,
  Receiving
};

std::string_view to_string(Phase p);

enum class Role { None, Initiator, Responder };

// One RTS/CTS (or basic) exchange as seen by one of its two endpoints.
struct Exchange {
  Role role = Role::None;
  NodeId partner = -1;
  bool full_duplex = false;
  bool sends_data = false;     // this node has a data frame in the exchange
  bool expects_data = false;   // partner data is expected or has arrived
  bool data_sent = false;
  bool data_received = false;
  bool ack_owed = false;
  bool ack_queued = false;
  bool ack_sent = false;
  bool ack_received = false;
  bool used_rts = false;
  bool established = false;  // CTS exchanged, partner frames may overlap ours
  Nanos nav_end = 0;
  Packet packet;
};

enum class TimerSlot { Access, Timeout };

struct StationState {
  NodeId id = 0;
  NodeKind kind = NodeKind::FdStation;
  Politeness politeness = Politeness::Standard;
  bool full_duplex = false;  // can transmit and receive at once
  bool fd_aware = false;     // follows the full-duplex MAC deference rules
  bool use_rts = true;

  Phase phase = Phase::Idle;
  bool fdack_flag = false;
  Nanos nav_until = 0;
  Nanos cts_nav_until = -1;  // NAV end announced by the last overheard CTS
  Nanos ack_deadline = 0;
  int backoff_slots = -1;  // -1: nothing drawn
  int cw = 15;
  int short_retries = 0;
  int long_retries = 0;

  // Contention bookkeeping.
  bool contending = false;
  bool access_armed = false;
  Nanos idle_since = 0;
  Nanos ifs = 0;
  Nanos count_start = 0;
  Nanos access_at = 0;

  Exchange ex;
  std::optional<Packet> current;  // packet this node is trying to send
  std::optional<TxQueue> queue;   // access point only
};

enum class InputKind { FrameRx, TxDone, Timer, MediumBusy, MediumIdle, Wake };

struct Input {
  InputKind kind = InputKind::Wake;
  Frame frame;
  bool decoded = false;  // FrameRx: frame arrived intact
  TimerSlot slot = TimerSlot::Access;
};

enum class ActionKind {
  Send,          // frame, delay
  SetTimer,      // slot, at
  CancelTimer,   // slot
  CancelSends,   // drop every scheduled but not yet started transmission
  Delivered,     // packet acknowledged
  Dropped,       // packet hit its retry limit
  ReleaseToken   // scheduled access: exchange finished
};

struct Action {
  ActionKind kind;
  Frame frame{};
  Nanos delay = 0;
  TimerSlot slot = TimerSlot::Access;
  Nanos at = 0;
  Packet packet{};
};

// What the station can see of the world besides its own state.
struct Env {
  Nanos now = 0;
  const MacParams* params = nullptr;
  bool medium_busy = false;
  Rng* backoff_rng = nullptr;
  // Whether a node can take part in a full-duplex exchange.
  std::function<bool(NodeId)> peer_full_duplex;
  // Next packet for a station's uplink; empty when the station has no traffic.
  std::function<std::optional<Packet>(NodeId)> next_uplink;
  // Tops the access point queue back up after packets leave it.
  std::function<void(TxQueue&)> refill;
  // Scheduled access: only the holder may contend, with zero backoff.
  bool scheduled = false;
  NodeId token_holder = -1;
  NodeId access_point = 0;
};

// Throws std::logic_error on an input the current phase cannot accept.
std::vector<Action> step_station(StationState& st, const Input& in, Env& env);

// Prepares a fresh station; draws its first backoff.
void init_station(StationState& st, Env& env);

}  // namespace fdwifi::mac
