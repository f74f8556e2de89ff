#include "fdwifi/fd_dcf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fdwifi::mac {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::AccessPoint: return "ap";
    case NodeKind::FdStation: return "fd";
    case NodeKind::HdLegacyStation: return "hd-legacy";
    case NodeKind::HdModifiedStation: return "hd-modified";
  }
  return "?";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Deferring: return "Deferring";
    case Phase::Backoff: return "Backoff";
    case Phase::TxRts: return "TxRts";
    case Phase::AwaitCts: return "AwaitCts";
    case Phase::TxData: return "TxData";
    case Phase::AwaitAck: return "AwaitAck";
    case Phase::TxCts: return "TxCts";
    case Phase::TxFdData: return "TxFdData";
    case Phase::TxAck: return "TxAck";
    case Phase::Receiving: return "Receiving";
  }
  return "?";
}

// ---- queue -------------------------------------------------------------

bool TxQueue::push(const Packet& p) {
  if (!fits(p.bytes)) return false;
  auto& q = per_dst_[p.dst];
  if (!q.empty() && q.back().seq > p.seq)
    throw std::logic_error("queue push out of arrival order");
  q.push_back(p);
  bytes_ += p.bytes;
  ++count_;
  return true;
}

void TxQueue::requeue(const Packet& p) {
  auto& q = per_dst_[p.dst];
  auto pos = std::lower_bound(q.begin(), q.end(), p.seq,
                              [](const Packet& a, std::uint64_t s) { return a.seq < s; });
  q.insert(pos, p);
  bytes_ += p.bytes;
  ++count_;
}

std::optional<Packet> TxQueue::head() const {
  std::optional<Packet> best;
  for (const auto& [dst, q] : per_dst_)
    if (!q.empty() && (!best || q.front().seq < best->seq)) best = q.front();
  return best;
}

void TxQueue::remove_front(std::map<NodeId, std::deque<Packet>>::iterator it) {
  bytes_ -= it->second.front().bytes;
  --count_;
  it->second.pop_front();
}

std::optional<Packet> TxQueue::pop_head() {
  auto best = per_dst_.end();
  for (auto it = per_dst_.begin(); it != per_dst_.end(); ++it)
    if (!it->second.empty() &&
        (best == per_dst_.end() || it->second.front().seq < best->second.front().seq))
      best = it;
  if (best == per_dst_.end()) return std::nullopt;
  Packet p = best->second.front();
  remove_front(best);
  return p;
}

std::optional<Packet> TxQueue::take_first_for(NodeId dst) {
  auto it = per_dst_.find(dst);
  if (it == per_dst_.end() || it->second.empty()) return std::nullopt;
  Packet p = it->second.front();
  remove_front(it);
  return p;
}

std::optional<Packet> ap_queue_select(TxQueue& queue, NodeId rts_sender) {
  return queue.take_first_for(rts_sender);
}

// ---- deference -----------------------------------------------------------

Wait deference_policy(NodeKind kind, bool fd_aware, Politeness pol, Observation obs,
                      const DeferenceContext& ctx) {
  switch (obs) {
    case Observation::CleanFrameEnd:
    case Observation::OwnAckReceived:
      return Wait::Difs;
    case Observation::FdExchangeEnd:
      return pol == Politeness::PoliteEifs ? Wait::Eifs : Wait::Difs;
    case Observation::ErroneousFrameEnd:
      if (kind == NodeKind::HdLegacyStation || !fd_aware) return Wait::Eifs;
      if (pol == Politeness::PoliteEifs) return Wait::Eifs;
      return ctx.overheard_cts && ctx.within_nav ? Wait::Difs : Wait::Eifs;
  }
  return Wait::Eifs;
}

// ---- station -------------------------------------------------------------

namespace {

class Step {
 public:
  Step(StationState& st, Env& env)
      : st_(st), env_(env), p_(*env.params), now_(env.now) {}

  std::vector<Action> take() { return std::move(out_); }

  void frame_rx(const Frame& f, bool decoded) {
    if (!decoded) {
      const DeferenceContext ctx{st_.cts_nav_until >= 0, now_ <= st_.cts_nav_until};
      set_ifs(deference_policy(st_.kind, st_.fd_aware, st_.politeness,
                               Observation::ErroneousFrameEnd, ctx));
      return;
    }
    st_.ifs = p_.difs;
    if (f.dst != st_.id) {
      st_.nav_until = std::max(st_.nav_until, now_ + f.nav);
      if (f.kind == FrameKind::Cts) st_.cts_nav_until = now_ + f.nav;
      return;
    }
    switch (f.kind) {
      case FrameKind::Rts: on_rts(f); break;
      case FrameKind::Cts: on_cts(f); break;
      case FrameKind::Data:
      case FrameKind::FdData: on_data(f); break;
      case FrameKind::Ack: on_ack(f); break;
    }
  }

  void tx_done(const Frame& f) {
    switch (f.kind) {
      case FrameKind::Rts:
        expect(Phase::TxRts, "RTS finished outside TxRts");
        st_.phase = Phase::AwaitCts;
        set_timer(TimerSlot::Timeout, now_ + p_.response_timeout(FrameKind::Cts));
        break;
      case FrameKind::Cts:
        expect(Phase::TxCts, "CTS finished outside TxCts");
        if (st_.ex.full_duplex) {
          st_.phase = Phase::TxFdData;
        } else {
          // Partner data must be fully in by the end of the reservation
          // minus the ACK slot.
          st_.phase = Phase::Receiving;
          set_timer(TimerSlot::Timeout,
                    st_.ex.nav_end - p_.sifs - p_.duration(FrameKind::Ack) + p_.slot);
        }
        break;
      case FrameKind::Data:
      case FrameKind::FdData: {
        if (st_.ex.role == Role::None) throw std::logic_error("data finished outside an exchange");
        st_.ex.data_sent = true;
        st_.phase = Phase::AwaitAck;
        st_.ack_deadline =
            std::max(now_ + p_.response_timeout(FrameKind::Ack), st_.ex.nav_end + p_.slot);
        set_timer(TimerSlot::Timeout, st_.ack_deadline);
        maybe_send_ack();
        break;
      }
      case FrameKind::Ack:
        if (st_.ex.role == Role::None) throw std::logic_error("ACK finished outside an exchange");
        st_.ex.ack_sent = true;
        if (st_.ex.sends_data && !st_.ex.ack_received) st_.phase = Phase::AwaitAck;
        maybe_complete();
        break;
    }
  }

  void timer(TimerSlot slot) {
    if (slot == TimerSlot::Access) {
      if (!st_.access_armed) throw std::logic_error("access timer fired while not armed");
      st_.access_armed = false;
      st_.contending = false;
      st_.backoff_slots = -1;
      initiate();
      return;
    }
    switch (st_.phase) {
      case Phase::AwaitCts:
        fail_exchange();
        break;
      case Phase::Receiving:
        if (!st_.ex.data_received) abandon_response();
        break;
      default:
        if (st_.ex.role != Role::None) fail_exchange();
        break;
    }
  }

  void medium_busy() {
    if (st_.contending) freeze();
  }

  void medium_idle() {
    st_.idle_since = now_;
    if (st_.contending) arm();
  }

  void wake() {
    if (st_.contending)
      arm();
    else if (st_.ex.role == Role::None && !busy_phase())
      start_contention();
  }

 private:
  bool busy_phase() const {
    switch (st_.phase) {
      case Phase::Idle:
      case Phase::Deferring:
      case Phase::Backoff: return false;
      default: return true;
    }
  }

  void expect(Phase ph, const char* what) const {
    if (st_.phase != ph)
      throw std::logic_error(std::string(what) + " (phase " + std::string(to_string(st_.phase)) +
                             ", node " + std::to_string(st_.id) + ")");
  }

  void set_ifs(Wait w) { st_.ifs = w == Wait::Eifs ? p_.eifs() : p_.difs; }

  void send(Frame f, Nanos delay) {
    f.validate();
    out_.push_back({ActionKind::Send, f, delay});
  }
  void set_timer(TimerSlot s, Nanos at) {
    Action a{ActionKind::SetTimer};
    a.slot = s;
    a.at = at;
    out_.push_back(a);
  }
  void cancel_timer(TimerSlot s) {
    Action a{ActionKind::CancelTimer};
    a.slot = s;
    out_.push_back(a);
  }
  void emit(ActionKind k, const Packet& pkt) {
    Action a{k};
    a.packet = pkt;
    out_.push_back(a);
  }

  Frame make(FrameKind kind, NodeId dst, std::uint32_t bytes = 0, Nanos nav = 0) const {
    Frame f;
    f.kind = kind;
    f.src = st_.id;
    f.dst = dst;
    f.payload_bytes = bytes;
    f.duration = p_.duration(kind, bytes);
    f.nav = nav;
    return f;
  }

  void draw_backoff() {
    if (env_.scheduled) {
      st_.backoff_slots = 0;
      return;
    }
    std::uniform_int_distribution<int> d(0, st_.cw);
    st_.backoff_slots = d(*env_.backoff_rng);
  }

  bool is_ap() const { return st_.kind == NodeKind::AccessPoint; }

  bool ensure_packet() {
    if (st_.current) return true;
    if (is_ap()) {
      if (!st_.queue || st_.queue->empty()) return false;
      st_.current = st_.queue->pop_head();
      env_.refill(*st_.queue);
    } else {
      st_.current = env_.next_uplink(st_.id);
      if (!st_.current) return false;
    }
    return true;
  }

  void start_contention() {
    st_.contending = true;
    st_.phase = Phase::Deferring;
    if (st_.backoff_slots < 0) draw_backoff();
    if (env_.scheduled) st_.backoff_slots = 0;
    arm();
  }

  void leave_contention() {
    if (st_.access_armed) cancel_timer(TimerSlot::Access);
    st_.access_armed = false;
    st_.contending = false;
  }

  void arm() {
    if (env_.scheduled && env_.token_holder != st_.id) {
      st_.phase = Phase::Deferring;
      return;
    }
    if (env_.medium_busy) {
      st_.phase = Phase::Deferring;
      return;
    }
    const Nanos ready = std::max(st_.idle_since, st_.nav_until) + st_.ifs;
    st_.count_start = std::max(ready, now_);
    st_.access_at = st_.count_start + st_.backoff_slots * p_.slot;
    st_.access_armed = true;
    st_.phase = now_ < ready ? Phase::Deferring : Phase::Backoff;
    set_timer(TimerSlot::Access, st_.access_at);
  }

  void freeze() {
    if (!st_.access_armed) return;
    // A transmission starting in the very instant this node picked keeps
    // going: both transmit and collide.
    if (st_.access_at == now_) return;
    if (now_ > st_.count_start) {
      const auto elapsed = static_cast<int>((now_ - st_.count_start) / p_.slot);
      st_.backoff_slots = std::max(0, st_.backoff_slots - elapsed);
    }
    cancel_timer(TimerSlot::Access);
    st_.access_armed = false;
    st_.phase = Phase::Deferring;
  }

  void initiate() {
    if (!ensure_packet()) {
      st_.phase = Phase::Idle;
      return;
    }
    const Packet& pkt = *st_.current;
    st_.ex = Exchange{};
    st_.ex.role = Role::Initiator;
    st_.ex.partner = pkt.dst;
    st_.ex.sends_data = true;
    st_.ex.packet = pkt;
    st_.ex.used_rts = st_.use_rts;
    const Nanos data = p_.duration(FrameKind::Data, pkt.bytes);
    const Nanos ack = p_.duration(FrameKind::Ack);
    if (st_.use_rts) {
      const Nanos cts = p_.duration(FrameKind::Cts);
      const Nanos nav = p_.sifs + cts + p_.sifs + data + p_.sifs + ack;
      const Frame rts = make(FrameKind::Rts, pkt.dst, 0, nav);
      st_.ex.nav_end = now_ + rts.duration + nav;
      send(rts, 0);
      st_.phase = Phase::TxRts;
    } else {
      const Nanos nav = p_.sifs + ack;
      Frame f = make(FrameKind::Data, pkt.dst, pkt.bytes, nav);
      f.packet_seq = pkt.seq;
      st_.ex.nav_end = now_ + data + nav;
      send(f, 0);
      st_.phase = Phase::TxData;
    }
  }

  void on_rts(const Frame& f) {
    const bool free = !busy_phase() && st_.ex.role == Role::None && st_.nav_until <= now_;
    if (!free) return;
    leave_contention();
    Exchange ex;
    ex.role = Role::Responder;
    ex.partner = f.src;
    ex.expects_data = true;
    ex.used_rts = true;
    ex.established = true;
    const Nanos cts_dur = p_.duration(FrameKind::Cts);
    const Nanos cts_end = now_ + p_.sifs + cts_dur;
    ex.nav_end = now_ + f.nav;

    if (st_.full_duplex && env_.peer_full_duplex(f.src)) {
      std::optional<Packet> pkt;
      if (is_ap()) {
        if (st_.queue) {
          pkt = ap_queue_select(*st_.queue, f.src);
          if (pkt) env_.refill(*st_.queue);
        }
      } else if (f.src == env_.access_point && ensure_packet()) {
        pkt = st_.current;
      }
      if (pkt) {
        ex.full_duplex = true;
        ex.sends_data = true;
        ex.packet = *pkt;
      }
    }
    Nanos fd_end = 0;
    if (ex.full_duplex) {
      fd_end = cts_end + p_.sifs + p_.duration(FrameKind::FdData, ex.packet.bytes);
      ex.nav_end = std::max(ex.nav_end, fd_end + p_.sifs + p_.duration(FrameKind::Ack));
    }
    st_.ex = ex;
    send(make(FrameKind::Cts, f.src, 0, ex.nav_end - cts_end), p_.sifs);
    if (ex.full_duplex) {
      Frame d = make(FrameKind::FdData, f.src, ex.packet.bytes, ex.nav_end - fd_end);
      d.packet_seq = ex.packet.seq;
      send(d, p_.sifs + cts_dur + p_.sifs);
    }
    st_.phase = Phase::TxCts;
  }

  void on_cts(const Frame& f) {
    if (st_.phase != Phase::AwaitCts || f.src != st_.ex.partner) return;
    cancel_timer(TimerSlot::Timeout);
    st_.short_retries = 0;
    st_.ex.established = true;
    st_.ex.nav_end = now_ + f.nav;
    const Packet& pkt = st_.ex.packet;
    const Nanos data_end = now_ + p_.sifs + p_.duration(FrameKind::Data, pkt.bytes);
    Frame d = make(FrameKind::Data, pkt.dst, pkt.bytes, std::max<Nanos>(0, st_.ex.nav_end - data_end));
    d.packet_seq = pkt.seq;
    send(d, p_.sifs);
    st_.phase = Phase::TxData;
  }

  void on_data(const Frame& f) {
    if (st_.ex.role != Role::None) {
      if (f.src != st_.ex.partner) return;
      if (st_.ex.data_received) {
        // A second data frame inside one exchange means the exchange broke.
        out_.push_back({ActionKind::CancelSends});
        fail_exchange();
        return;
      }
      st_.ex.data_received = true;
      st_.ex.expects_data = true;
      st_.ex.ack_owed = true;
      if (st_.ex.sends_data) {
        st_.fdack_flag = true;
        st_.ex.full_duplex = true;
      }
      if (st_.phase == Phase::Receiving) cancel_timer(TimerSlot::Timeout);
      maybe_send_ack();
      return;
    }
    if (busy_phase()) return;
    // Basic access: acknowledge and resume the frozen backoff afterwards.
    leave_contention();
    st_.ex = Exchange{};
    st_.ex.role = Role::Responder;
    st_.ex.partner = f.src;
    st_.ex.expects_data = true;
    st_.ex.data_received = true;
    st_.ex.ack_owed = true;
    st_.ex.nav_end = now_ + f.nav;
    maybe_send_ack();
  }

  void on_ack(const Frame& f) {
    Exchange& ex = st_.ex;
    if (ex.role == Role::None || f.src != ex.partner || !ex.data_sent || ex.ack_received) return;
    ex.ack_received = true;
    emit(ActionKind::Delivered, ex.packet);
    maybe_complete();
  }

  void maybe_send_ack() {
    Exchange& ex = st_.ex;
    if (!ex.ack_owed || ex.ack_queued || !ex.data_received) return;
    if (ex.sends_data && !ex.data_sent) return;
    ex.ack_queued = true;
    send(make(FrameKind::Ack, ex.partner), p_.sifs);
    st_.phase = Phase::TxAck;
  }

  void maybe_complete() {
    const Exchange& ex = st_.ex;
    const bool own_done = !ex.sends_data || ex.ack_received;
    const bool owed_done = !ex.ack_owed || ex.ack_sent;
    if (own_done && owed_done) finish_exchange();
  }

  void finish_exchange() {
    cancel_timer(TimerSlot::Timeout);
    const Exchange ex = st_.ex;
    const bool fd = ex.full_duplex || st_.fdack_flag;
    set_ifs(deference_policy(st_.kind, st_.fd_aware, st_.politeness,
                             fd ? Observation::FdExchangeEnd : Observation::OwnAckReceived, {}));
    if (ex.sends_data) {
      // Own packet acknowledged: fresh window and fresh backoff.
      if (st_.current && st_.current->seq == ex.packet.seq) st_.current.reset();
      st_.cw = p_.cw_min;
      st_.short_retries = 0;
      st_.long_retries = 0;
      draw_backoff();
    }
    const bool release = ex.role == Role::Initiator;
    st_.ex = Exchange{};
    st_.fdack_flag = false;
    st_.idle_since = now_;
    if (release && env_.scheduled) out_.push_back({ActionKind::ReleaseToken});
    start_contention();
  }

  void fail_exchange() {
    cancel_timer(TimerSlot::Timeout);
    const Exchange ex = st_.ex;
    if (ex.role == Role::Initiator) {
      int* count = &st_.short_retries;
      int limit = p_.short_retry_limit;
      if (ex.used_rts && ex.data_sent) {
        count = &st_.long_retries;
        limit = p_.long_retry_limit;
      }
      ++*count;
      st_.cw = std::min(2 * st_.cw + 1, p_.cw_max);
      if (*count >= limit) {
        if (st_.current) emit(ActionKind::Dropped, *st_.current);
        st_.current.reset();
        st_.short_retries = 0;
        st_.long_retries = 0;
        st_.cw = p_.cw_min;
      }
      draw_backoff();
    } else if (ex.sends_data && !ex.ack_received && is_ap() && st_.queue) {
      // The secondary packet goes back where it came from.
      st_.queue->requeue(ex.packet);
    }
    st_.ex = Exchange{};
    st_.fdack_flag = false;
    if (ex.role == Role::Initiator && env_.scheduled) out_.push_back({ActionKind::ReleaseToken});
    start_contention();
  }

  void abandon_response() {
    cancel_timer(TimerSlot::Timeout);
    st_.ex = Exchange{};
    start_contention();
  }

  StationState& st_;
  Env& env_;
  const MacParams& p_;
  Nanos now_;
  std::vector<Action> out_;
};

}  // namespace

void init_station(StationState& st, Env& env) {
  const MacParams& p = *env.params;
  st.cw = p.cw_min;
  st.ifs = p.difs;
  st.idle_since = 0;
  st.phase = Phase::Idle;
  st.contending = false;
  st.access_armed = false;
  st.backoff_slots = -1;
  st.ex = Exchange{};
  st.fdack_flag = false;
}

std::vector<Action> step_station(StationState& st, const Input& in, Env& env) {
  if (!env.params) throw std::logic_error("station stepped without parameters");
  Step s(st, env);
  switch (in.kind) {
    case InputKind::FrameRx: s.frame_rx(in.frame, in.decoded); break;
    case InputKind::TxDone: s.tx_done(in.frame); break;
    case InputKind::Timer: s.timer(in.slot); break;
    case InputKind::MediumBusy: s.medium_busy(); break;
    case InputKind::MediumIdle: s.medium_idle(); break;
    case InputKind::Wake: s.wake(); break;
  }
  return s.take();
}

}  // namespace fdwifi::mac
