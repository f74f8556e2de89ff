#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fdwifi/fd_dcf.hpp"

namespace fdwifi::mac {

// Raw tallies collected by the engine during one run.
struct Counters {
  double sim_time_s = 0;
  std::uint64_t events = 0;
  std::uint64_t tx_started = 0;
  std::uint64_t tx_ended = 0;
  std::uint64_t rts_sent = 0;
  std::uint64_t rts_received = 0;   // decoded by their addressee
  std::uint64_t data_sent = 0;      // DATA and FDDATA
  std::uint64_t data_received = 0;
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t packets_queued = 0;     // still waiting at the end
  std::uint64_t packets_in_flight = 0;  // held by a station at the end
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> delivered_bytes;  // (src, dst)
  std::vector<NodeKind> kinds;  // indexed by node id; entry 0 is the access point
};

struct NodeGoodput {
  NodeId id = 0;
  NodeKind kind = NodeKind::FdStation;
  double uplink_mbps = 0;    // node -> access point
  double downlink_mbps = 0;  // access point -> node
};

struct MetricsReport {
  double sum_goodput_mbps = 0;
  // Class totals: downlink to half-duplex stations, downlink and uplink of
  // full-duplex stations, uplink of half-duplex stations.
  double dl_hd_mbps = 0;
  double dl_fd_mbps = 0;
  double ul_fd_mbps = 0;
  double ul_hd_mbps = 0;
  double rts_collision_pct = 0;
  double data_collision_pct = 0;
  bool rts_collision_defined = false;
  bool data_collision_defined = false;
  std::vector<NodeGoodput> per_node;
  std::uint64_t events = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_dropped = 0;

  // Per-station averages within a class, as the tables quote them.
  double per_node_dl_hd() const;
  double per_node_ul_hd() const;
  double per_node_dl_fd() const;
  double per_node_ul_fd() const;
};

MetricsReport metrics_finalize(const Counters& c);

}  // namespace fdwifi::mac
