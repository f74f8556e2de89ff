#include "fdwifi/metrics.hpp"

namespace fdwifi::mac {

namespace {

bool is_hd(NodeKind k) {
  return k == NodeKind::HdLegacyStation || k == NodeKind::HdModifiedStation;
}

double mean_of(const std::vector<NodeGoodput>& v, bool hd, bool downlink) {
  double sum = 0;
  int n = 0;
  for (const auto& g : v) {
    if (g.kind == NodeKind::AccessPoint || is_hd(g.kind) != hd) continue;
    sum += downlink ? g.downlink_mbps : g.uplink_mbps;
    ++n;
  }
  return n ? sum / n : 0.0;
}

}  // namespace

double MetricsReport::per_node_dl_hd() const { return mean_of(per_node, true, true); }
double MetricsReport::per_node_ul_hd() const { return mean_of(per_node, true, false); }
double MetricsReport::per_node_dl_fd() const { return mean_of(per_node, false, true); }
double MetricsReport::per_node_ul_fd() const { return mean_of(per_node, false, false); }

MetricsReport metrics_finalize(const Counters& c) {
  MetricsReport r;
  r.events = c.events;
  r.packets_delivered = c.packets_delivered;
  r.packets_dropped = c.packets_dropped;
  const double scale = c.sim_time_s > 0 ? 8.0 / (c.sim_time_s * 1e6) : 0.0;

  for (std::size_t id = 1; id < c.kinds.size(); ++id)
    r.per_node.push_back({static_cast<NodeId>(id), c.kinds[id], 0.0, 0.0});
  for (const auto& [link, bytes] : c.delivered_bytes) {
    const auto [src, dst] = link;
    const double mbps = static_cast<double>(bytes) * scale;
    if (src == 0 && dst > 0 && dst < static_cast<NodeId>(c.kinds.size()))
      r.per_node[dst - 1].downlink_mbps += mbps;
    else if (dst == 0 && src > 0 && src < static_cast<NodeId>(c.kinds.size()))
      r.per_node[src - 1].uplink_mbps += mbps;
  }
  for (const auto& g : r.per_node) {
    if (is_hd(g.kind)) {
      r.dl_hd_mbps += g.downlink_mbps;
      r.ul_hd_mbps += g.uplink_mbps;
    } else {
      r.dl_fd_mbps += g.downlink_mbps;
      r.ul_fd_mbps += g.uplink_mbps;
    }
  }
  r.sum_goodput_mbps = r.dl_hd_mbps + r.dl_fd_mbps + r.ul_fd_mbps + r.ul_hd_mbps;

  if (c.rts_sent > 0) {
    r.rts_collision_defined = true;
    r.rts_collision_pct =
        100.0 * static_cast<double>(c.rts_sent - c.rts_received) / static_cast<double>(c.rts_sent);
  }
  if (c.data_sent > 0) {
    r.data_collision_defined = true;
    r.data_collision_pct = 100.0 * static_cast<double>(c.data_sent - c.data_received) /
                           static_cast<double>(c.data_sent);
  }
  return r;
}

}  // namespace fdwifi::mac
