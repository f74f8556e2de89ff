#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "fdwifi/fd_dcf.hpp"
#include "fdwifi/frame.hpp"
#include "fdwifi/metrics.hpp"

namespace fdwifi::mac {

// Receive quality. Everyone hears everyone at the same level; a node that
// receives while it transmits loses its residual self-interference on top.
struct LinkQuality {
  double hd_sinr_db = 36.0;
  double fd_sinr_db = 21.8;
  // When non-empty each full-duplex reception draws one entry.
  std::vector<double> fd_sinr_samples_db;
};

struct EngineSetup {
  MacParams params;
  std::vector<NodeKind> nodes;  // entry 0 is the access point
  bool ap_full_duplex = true;
  Politeness politeness = Politeness::Standard;
  bool use_rts = true;
  std::uint32_t uplink_bytes = 1500;
  std::uint32_t downlink_bytes = 1500;
  std::uint64_t buffer_bytes = 25600ull * 1024;
  bool traffic = true;  // false: no node ever has a packet
  LinkQuality link;
  // Round-robin token instead of random backoff; nobody ever collides.
  bool scheduled = false;
  Nanos until = seconds(10);
  std::uint64_t seed = 1;

  void validate() const;
};

enum class TraceKind { TxStart, TxEnd, RxStart, RxEnd, TimerFired };

struct TraceEntry {
  Nanos time = 0;
  TraceKind kind = TraceKind::TxStart;
  NodeId node = 0;
  Frame frame;
  MediumOutcome outcome = MediumOutcome::Clean;
  bool decoded = false;
};

class Engine {
 public:
  explicit Engine(EngineSetup setup);

  MetricsReport run();

  const Counters& counters() const { return counters_; }
  const StationState& station(NodeId id) const { return stations_.at(id); }
  std::size_t node_count() const { return stations_.size(); }
  Nanos now() const { return now_; }

  // Called for every dispatched event; for tests and debugging.
  std::function<void(const TraceEntry&, const Engine&)> on_trace;

 private:
  enum class EvType { TxStart, TxEnd, Timer };
  struct Event {
    Nanos t;
    NodeId node;
    std::uint64_t seq;
    EvType type;
    std::uint64_t ref;   // pending send index or frame id
    int slot;
    std::uint64_t gen;   // timer generation or send epoch
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.t != b.t) return a.t > b.t;
      if (a.node != b.node) return a.node > b.node;
      return a.seq > b.seq;
    }
  };

  void push(Event e);
  void dispatch(NodeId n, const Input& in);
  void apply(NodeId n, std::vector<Action> actions);
  void on_tx_start(const Event& e);
  void on_tx_end(const Event& e);
  void on_timer(const Event& e);
  void trace(TraceKind k, NodeId n, const Frame& f, MediumOutcome o = MediumOutcome::Clean,
             bool decoded = false);
  Env& env();
  std::optional<Packet> make_uplink(NodeId n);
  void refill(TxQueue& q);
  double fd_sinr();
  void finalize_counts();

  EngineSetup setup_;
  std::vector<StationState> stations_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  Nanos now_ = 0;
  bool medium_busy_ = false;
  std::vector<Transmission> active_;
  std::vector<Transmission> recent_;
  std::unordered_map<std::uint64_t, Frame> pending_;
  std::uint64_t next_pending_ = 0;
  std::vector<std::array<std::uint64_t, 2>> timer_gen_;
  std::vector<std::uint64_t> send_epoch_;
  std::uint64_t next_frame_id_ = 1;
  std::uint64_t next_packet_seq_ = 1;
  NodeId token_ = 0;
  Rng backoff_rng_;
  Rng traffic_rng_;
  Rng channel_rng_;
  Env env_;
  Counters counters_;
  bool ran_ = false;
};

MetricsReport run(const EngineSetup& setup);

}  // namespace fdwifi::mac
