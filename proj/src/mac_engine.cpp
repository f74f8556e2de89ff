#include "fdwifi/mac_engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace fdwifi::mac {

void EngineSetup::validate() const {
  params.validate();
  if (nodes.empty() || nodes[0] != NodeKind::AccessPoint)
    throw std::invalid_argument("node 0 must be the access point");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i] == NodeKind::AccessPoint)
      throw std::invalid_argument("exactly one access point per scenario");
  if (uplink_bytes > kMaxPayloadBytes || downlink_bytes > kMaxPayloadBytes)
    throw std::invalid_argument("payload exceeds 1500 bytes");
  if (until <= 0) throw std::invalid_argument("simulation time must be positive");
}

Engine::Engine(EngineSetup setup)
    : setup_(std::move(setup)),
      backoff_rng_(mix_seed(setup_.seed, 1)),
      traffic_rng_(mix_seed(setup_.seed, 2)),
      channel_rng_(mix_seed(setup_.seed, 3)) {
  setup_.validate();
  const std::size_t n = setup_.nodes.size();
  stations_.resize(n);
  timer_gen_.assign(n, {0, 0});
  send_epoch_.assign(n, 0);
  counters_.kinds = setup_.nodes;

  env_.params = &setup_.params;
  env_.backoff_rng = &backoff_rng_;
  env_.scheduled = setup_.scheduled;
  env_.access_point = 0;
  env_.peer_full_duplex = [this](NodeId id) { return stations_.at(id).full_duplex; };
  env_.next_uplink = [this](NodeId id) { return make_uplink(id); };
  env_.refill = [this](TxQueue& q) { refill(q); };

  for (std::size_t i = 0; i < n; ++i) {
    StationState& st = stations_[i];
    st.id = static_cast<NodeId>(i);
    st.kind = setup_.nodes[i];
    st.politeness = setup_.politeness;
    st.use_rts = setup_.use_rts;
    switch (st.kind) {
      case NodeKind::AccessPoint:
        st.full_duplex = setup_.ap_full_duplex;
        st.fd_aware = setup_.ap_full_duplex;
        st.queue.emplace(setup_.buffer_bytes);
        break;
      case NodeKind::FdStation:
        st.full_duplex = true;
        st.fd_aware = true;
        break;
      case NodeKind::HdModifiedStation:
        st.fd_aware = true;
        break;
      case NodeKind::HdLegacyStation:
        break;
    }
    init_station(st, env());
    if (setup_.scheduled) {
      st.backoff_slots = 0;
    } else {
      std::uniform_int_distribution<int> d(0, st.cw);
      st.backoff_slots = d(backoff_rng_);
    }
  }
  if (setup_.traffic && n > 1) refill(*stations_[0].queue);
}

Env& Engine::env() {
  env_.now = now_;
  env_.medium_busy = medium_busy_;
  env_.token_holder = token_;
  return env_;
}

std::optional<Packet> Engine::make_uplink(NodeId n) {
  if (!setup_.traffic) return std::nullopt;
  ++counters_.packets_generated;
  return Packet{next_packet_seq_++, n, 0, setup_.uplink_bytes};
}

void Engine::refill(TxQueue& q) {
  const int stations = static_cast<int>(stations_.size()) - 1;
  if (!setup_.traffic || stations <= 0) return;
  std::uniform_int_distribution<int> pick(1, stations);
  while (q.fits(setup_.downlink_bytes)) {
    q.push(Packet{next_packet_seq_++, 0, pick(traffic_rng_), setup_.downlink_bytes});
    ++counters_.packets_generated;
  }
}

double Engine::fd_sinr() {
  const auto& s = setup_.link.fd_sinr_samples_db;
  if (s.empty()) return setup_.link.fd_sinr_db;
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  return s[pick(channel_rng_)];
}

void Engine::push(Event e) {
  if (e.t < now_)
    throw std::logic_error("event scheduled in the past at t=" + std::to_string(e.t) +
                           " (now " + std::to_string(now_) + ")");
  e.seq = seq_++;
  events_.push(e);
}

void Engine::trace(TraceKind k, NodeId n, const Frame& f, MediumOutcome o, bool decoded) {
  if (on_trace) on_trace(TraceEntry{now_, k, n, f, o, decoded}, *this);
}

void Engine::dispatch(NodeId n, const Input& in) {
  apply(n, step_station(stations_[n], in, env()));
}

void Engine::apply(NodeId n, std::vector<Action> actions) {
  for (auto& a : actions) {
    switch (a.kind) {
      case ActionKind::Send: {
        const std::uint64_t key = next_pending_++;
        pending_.emplace(key, a.frame);
        push({now_ + a.delay, n, 0, EvType::TxStart, key, 0, send_epoch_[n]});
        break;
      }
      case ActionKind::SetTimer: {
        const int s = static_cast<int>(a.slot);
        push({a.at, n, 0, EvType::Timer, 0, s, ++timer_gen_[n][s]});
        break;
      }
      case ActionKind::CancelTimer:
        ++timer_gen_[n][static_cast<int>(a.slot)];
        break;
      case ActionKind::CancelSends:
        ++send_epoch_[n];
        break;
      case ActionKind::Delivered:
        ++counters_.packets_delivered;
        counters_.delivered_bytes[{a.packet.src, a.packet.dst}] += a.packet.bytes;
        break;
      case ActionKind::Dropped:
        ++counters_.packets_dropped;
        break;
      case ActionKind::ReleaseToken: {
        token_ = static_cast<NodeId>((token_ + 1) % static_cast<NodeId>(stations_.size()));
        Input in;
        in.kind = InputKind::Wake;
        dispatch(token_, in);
        break;
      }
    }
  }
}

void Engine::on_tx_start(const Event& e) {
  auto pit = pending_.find(e.ref);
  Frame f = pit->second;
  pending_.erase(pit);
  if (e.gen != send_epoch_[e.node]) return;
  for (const auto& t : active_)
    if (t.frame.src == e.node)
      throw std::logic_error("node " + std::to_string(e.node) + " started two transmissions");
  f.id = next_frame_id_++;
  active_.push_back({f, now_, now_ + f.duration});
  ++counters_.tx_started;
  if (f.kind == FrameKind::Rts) ++counters_.rts_sent;
  if (f.is_data()) ++counters_.data_sent;
  trace(TraceKind::TxStart, e.node, f);
  push({now_ + f.duration, e.node, 0, EvType::TxEnd, f.id, 0, 0});
  if (!medium_busy_) {
    medium_busy_ = true;
    Input in;
    in.kind = InputKind::MediumBusy;
    for (std::size_t r = 0; r < stations_.size(); ++r) {
      if (static_cast<NodeId>(r) == e.node) continue;
      trace(TraceKind::RxStart, static_cast<NodeId>(r), f);
      dispatch(static_cast<NodeId>(r), in);
    }
  }
}

void Engine::on_tx_end(const Event& e) {
  auto it = std::find_if(active_.begin(), active_.end(),
                         [&](const Transmission& t) { return t.frame.id == e.ref; });
  if (it == active_.end()) throw std::logic_error("transmission ended twice");
  const Transmission tx = *it;
  active_.erase(it);
  ++counters_.tx_ended;
  trace(TraceKind::TxEnd, tx.frame.src, tx.frame);

  // Everything that could overlap the finished frame.
  std::vector<Transmission> medium = active_;
  for (const auto& t : recent_)
    if (t.end > tx.start) medium.push_back(t);
  recent_.erase(std::remove_if(recent_.begin(), recent_.end(),
                               [&](const Transmission& t) { return t.end + micros(2000) < now_; }),
                recent_.end());
  recent_.push_back(tx);

  Input done;
  done.kind = InputKind::TxDone;
  done.frame = tx.frame;
  dispatch(tx.frame.src, done);

  for (std::size_t r = 0; r < stations_.size(); ++r) {
    const auto rid = static_cast<NodeId>(r);
    if (rid == tx.frame.src) continue;
    const StationState& st = stations_[r];
    ReceiverView view{rid, std::nullopt, st.ex.nav_end};
    if (st.full_duplex && st.ex.established) view.fd_partner = st.ex.partner;
    const MediumOutcome o = medium_resolve(tx, medium, view);

    bool transmitted = false;
    for (const auto& t : medium)
      if (t.frame.src == rid && t.start < tx.end && tx.start < t.end) transmitted = true;
    // A node that was sending hears nothing except its full-duplex partner.
    if (transmitted && o != MediumOutcome::SelfDecodable) continue;

    bool decoded = false;
    if (o != MediumOutcome::Collided) {
      const double sinr = o == MediumOutcome::SelfDecodable ? fd_sinr() : setup_.link.hd_sinr_db;
      decoded = channel_error(tx.frame, sinr, setup_.params.rate_mbps, setup_.params.phy,
                              channel_rng_) == RxResult::Delivered;
    }
    if (rid == tx.frame.dst && decoded) {
      if (tx.frame.kind == FrameKind::Rts) ++counters_.rts_received;
      if (tx.frame.is_data()) ++counters_.data_received;
    }
    trace(TraceKind::RxEnd, rid, tx.frame, o, decoded);
    Input in;
    in.kind = InputKind::FrameRx;
    in.frame = tx.frame;
    in.decoded = decoded;
    dispatch(rid, in);
  }

  if (active_.empty() && medium_busy_) {
    medium_busy_ = false;
    Input in;
    in.kind = InputKind::MediumIdle;
    for (std::size_t r = 0; r < stations_.size(); ++r) dispatch(static_cast<NodeId>(r), in);
  }
}

void Engine::on_timer(const Event& e) {
  if (e.gen != timer_gen_[e.node][e.slot]) return;
  Input in;
  in.kind = InputKind::Timer;
  in.slot = static_cast<TimerSlot>(e.slot);
  trace(TraceKind::TimerFired, e.node, Frame{});
  dispatch(e.node, in);
}

MetricsReport Engine::run() {
  if (ran_) throw std::logic_error("engine can only run once");
  ran_ = true;
  Input wake;
  wake.kind = InputKind::Wake;
  if (setup_.traffic)
    for (std::size_t r = 0; r < stations_.size(); ++r) dispatch(static_cast<NodeId>(r), wake);

  while (!events_.empty() && events_.top().t <= setup_.until) {
    const Event e = events_.top();
    events_.pop();
    now_ = e.t;
    ++counters_.events;
    switch (e.type) {
      case EvType::TxStart: on_tx_start(e); break;
      case EvType::TxEnd: on_tx_end(e); break;
      case EvType::Timer: on_timer(e); break;
    }
  }
  now_ = setup_.until;
  finalize_counts();
  return metrics_finalize(counters_);
}

void Engine::finalize_counts() {
  counters_.sim_time_s = static_cast<double>(setup_.until) / 1e9;
  counters_.packets_queued = stations_[0].queue ? stations_[0].queue->size() : 0;
  std::set<std::uint64_t> held;
  for (const auto& st : stations_) {
    if (st.current) held.insert(st.current->seq);
    if (st.ex.sends_data && !st.ex.ack_received) held.insert(st.ex.packet.seq);
  }
  counters_.packets_in_flight = held.size();
}

MetricsReport run(const EngineSetup& setup) {
  Engine e(setup);
  return e.run();
}

}  // namespace fdwifi::mac
