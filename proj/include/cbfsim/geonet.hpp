#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>

#include "cbfsim/cbf_buffer.hpp"
#include "cbfsim/cbf_timer.hpp"
#include "cbfsim/dpl.hpp"
#include "cbfsim/location_table.hpp"
#include "cbfsim/packet.hpp"
#include "cbfsim/trace.hpp"

namespace cbfsim {

// The four evaluated forwarding mechanisms. Each one includes everything
// the previous ones add: Dpd adds long-term duplicate detection and border
// suppression, Gpc adds geometric cancellation plus source retransmission,
// Fot additionally couples contention timers to the access-layer gate.
enum class Algorithm : std::uint8_t { Etsi, Dpd, Gpc, Fot };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Etsi: return "etsi";
    case Algorithm::Dpd: return "dpd";
    case Algorithm::Gpc: return "gpc";
    case Algorithm::Fot: return "fot";
  }
  return "?";
}

struct GeonetParams {
  Algorithm algorithm = Algorithm::Etsi;
  CbfParams cbf;
  std::size_t dpl_capacity = 32;
  std::size_t scf_capacity = 16;
  // Never greedy-forward packets that arrived with the broadcast link
  // address. Default follows the mechanism set: off for the baseline, on
  // for all duplicate-detection variants.
  std::optional<bool> suppress_broadcast_greedy;

  bool suppression_active() const {
    return suppress_broadcast_greedy.value_or(algorithm != Algorithm::Etsi);
  }
  bool dpd_active() const { return algorithm != Algorithm::Etsi; }
};

// Services the network layer needs from the node it runs on. The engine
// implements this against the event queue and the access layer; tests use
// recording stubs.
struct GeonetEnv {
  virtual ~GeonetEnv() = default;
  virtual TimeUs now() const = 0;
  virtual PositionVector ego_position() const = 0;
  virtual TimeUs gate_open_at() const = 0;  // cross-layer view of the DCC gate
  virtual void set_cbf_timer(const PacketId& id, TimeUs deadline) = 0;
  virtual void cancel_cbf_timer(const PacketId& id) = 0;
  virtual void release_to_dcc(const GbcPacket& p, TcPriority tc) = 0;
  virtual void deliver_to_facilities(const GbcPacket& p) = 0;
};

// Per-node network layer: receiver pipeline, contention forwarding,
// duplicate detection, store-carry-forward buffer and the non-area
// (greedy) handling at the area border.
class GeonetRouter {
 public:
  GeonetRouter(NodeId self, const GeonetParams& params, GeonetEnv& env,
               TraceSink* trace = nullptr)
      : self_(self), params_(params), env_(env), trace_(trace),
        dpl_(params.dpl_capacity) {}

  LocationTable& location_table() { return loct_; }
  DuplicatePacketList& dpl() { return dpl_; }
  const CbfBuffer& buffer() const { return buffer_; }
  const GeonetParams& params() const { return params_; }

  // Source path: a packet generated by the local facilities layer. It is
  // always transmitted immediately; the duplicate-detection variants also
  // remember it, and the geometric variants buffer a safeguard copy so the
  // source can retransmit if the first hop is lost.
  void originate(GbcPacket p) {
    const TimeUs now = env_.now();
    emit(TraceEvent::DenmGenerated, p.id);
    switch (params_.algorithm) {
      case Algorithm::Etsi:
        break;
      case Algorithm::Dpd:
        dpl_.insert(p.id, false);
        break;
      case Algorithm::Gpc:
      case Algorithm::Fot: {
        dpl_.insert(p.id, false);
        TimeUs deadline = now + params_.cbf.t_max;
        if (params_.algorithm == Algorithm::Fot)
          deadline = std::max(deadline, env_.gate_open_at());
        buffer_.insert(p, deadline, now);
        env_.set_cbf_timer(p.id, deadline);
        emit(TraceEvent::Buffered, p.id);
        break;
      }
    }
    env_.release_to_dcc(p, p.tc.priority);
  }

  // Receiver pipeline for a frame this node decoded. `sender` is the
  // station the frame physically came from (source or previous forwarder).
  void on_gbc(GbcPacket p, NodeId sender) {
    const TimeUs now = env_.now();
    if (now >= p.expiry_at) {
      emit(TraceEvent::LifetimeDropped, p.id, sender);
      return;
    }
    const PositionVector ego = env_.ego_position();
    const bool inside = p.area.containment(ego.position) >= 0.0;

    // Outside the area the non-area algorithm applies, and known
    // duplicates are dropped before any further processing.
    if (!inside && dpl_.contains(p.id)) {
      emit(TraceEvent::DuplicateDropped, p.id, sender);
      return;
    }

    loct_.update_position(p.id.source, p.source_pv, now);
    if (sender == p.id.source) {
      // Hearing the source directly is as good as a beacon from it.
      loct_.mark_neighbour(sender, now);
    }

    if (inside) {
      if (!params_.dpd_active()) {
        emit(TraceEvent::Delivered, p.id, sender);
        env_.deliver_to_facilities(p);
      } else if (!dpl_.contains(p.id)) {
        emit(TraceEvent::Delivered, p.id, sender);
        env_.deliver_to_facilities(p);
        dpl_.insert(p.id, true);
      } else {
        emit(TraceEvent::DuplicateDropped, p.id, sender);
      }
    }

    flush_scf_if_neighbour();

    if (p.rhl <= 1) {
      emit(TraceEvent::RhlDropped, p.id, sender);
      return;
    }
    p.rhl -= 1;

    if (!loct_.has_neighbour() && p.tc.scf) {
      park_in_scf(p, sender);
      return;
    }

    const ForwardDecision decision =
        inside ? forward_area(p, sender) : forward_non_area(p, sender);
    if (decision == ForwardDecision::TransmitNow)
      env_.release_to_dcc(p, TcPriority::TC3);
  }

  void on_cam(const CamFrame& cam) {
    const TimeUs now = env_.now();
    loct_.update_position(cam.sender, cam.pv, now);
    loct_.mark_neighbour(cam.sender, now);
    flush_scf_if_neighbour();
  }

  enum class ExpiryAction { Released, Rearmed, Dropped };

  // Contention timer fired. The entry must exist; a missing entry means the
  // engine's timer bookkeeping is broken.
  ExpiryAction on_timer_expiry(const PacketId& id) {
    const TimeUs now = env_.now();
    CbfBufferEntry* entry = buffer_.find(id);
    if (entry == nullptr)
      throw std::logic_error("cbf timer fired for a packet not in the buffer");

    drain_lifetime(*entry, now);
    if (entry->packet.lifetime_us <= 0 || now >= entry->packet.expiry_at) {
      emit(TraceEvent::LifetimeDropped, id);
      buffer_.erase(id);
      return ExpiryAction::Dropped;
    }

    if (params_.algorithm == Algorithm::Fot) {
      const TimeUs gate = env_.gate_open_at();
      if (now < gate) {
        // Gate closed (e.g. extended by an interleaved beacon): keep the
        // packet cancellable and try again when the gate opens.
        entry->deadline = gate;
        env_.set_cbf_timer(id, gate);
        emit(TraceEvent::Rearmed, id);
        return ExpiryAction::Rearmed;
      }
    }

    GbcPacket packet = entry->packet;
    buffer_.erase(id);
    emit(TraceEvent::TimerExpired, id);
    const TcPriority tc =
        packet.id.source == self_ ? packet.tc.priority : TcPriority::TC3;
    env_.release_to_dcc(packet, tc);
    return ExpiryAction::Released;
  }

  std::size_t scf_depth() const { return scf_.size(); }

 private:
  ForwardDecision forward_area(const GbcPacket& p, NodeId sender) {
    switch (params_.algorithm) {
      case Algorithm::Etsi:
        return forward_contention(p, sender, /*dpd=*/false);
      case Algorithm::Dpd:
        return forward_contention(p, sender, /*dpd=*/true);
      case Algorithm::Gpc:
      case Algorithm::Fot:
        return forward_geometric(p, sender);
    }
    return ForwardDecision::Discarded;
  }

  // Baseline contention forwarding, optionally with the duplicate-list
  // check for packets that already left the buffer.
  ForwardDecision forward_contention(const GbcPacket& p, NodeId sender, bool dpd) {
    if (buffer_.contains(p.id)) {
      cancel_entry(p.id);
      return ForwardDecision::Discarded;
    }
    if (dpd) {
      if (dpl_.contains(p.id) && !dpl_.is_new_added(p.id)) {
        // Seen before and already contended for: a second forwarding wave
        // would start here, so the packet is dropped instead.
        emit(TraceEvent::DuplicateDropped, p.id, sender);
        return ForwardDecision::Discarded;
      }
      dpl_.insert(p.id, false);
    }
    buffer_packet(p, sender);
    return ForwardDecision::Buffered;
  }

  // Geometric variant: a duplicate only cancels the buffered copy when its
  // sender is farther from the source than we are and on our side of it;
  // otherwise the copy is kept and re-staged against the new sender.
  ForwardDecision forward_geometric(const GbcPacket& p, NodeId sender) {
    const TimeUs now = env_.now();
    if (CbfBufferEntry* entry = buffer_.find(p.id)) {
      const PositionVector ego = env_.ego_position();
      const Position source_pos = p.source_pv.position;
      const LocationTableEntry* se = loct_.find(sender);
      const bool valid = se != nullptr && se->pv.has_value() &&
                         se->pv->accurate && ego.accurate;
      const double d1 = distance(ego.position, source_pos);
      double d2 = 0.0, d3 = 0.0;
      if (valid) {
        d2 = distance(se->pv->position, source_pos);
        d3 = distance(ego.position, se->pv->position);
      }
      const bool cancel = d1 < d2 && d2 > d3;
      trace_cancel_decision(p, sender, ego.position,
                            valid ? se->pv->position : Position{}, source_pos,
                            cancel);
      if (cancel) {
        cancel_entry(p.id);
        return ForwardDecision::Discarded;
      }
      // Keep contending: the received copy replaces the stored one and the
      // timer restarts against the distance to this sender.
      TimeUs deadline = now + compute_cbf_timer(d3, params_.cbf);
      if (params_.algorithm == Algorithm::Fot)
        deadline = std::max(deadline, env_.gate_open_at());
      entry->packet = p;
      entry->deadline = deadline;
      entry->inserted_at = now;
      env_.set_cbf_timer(p.id, deadline);
      emit(TraceEvent::Rescheduled, p.id, sender);
      return ForwardDecision::Buffered;
    }
    if (dpl_.contains(p.id) && !dpl_.is_new_added(p.id)) {
      emit(TraceEvent::DuplicateDropped, p.id, sender);
      return ForwardDecision::Discarded;
    }
    dpl_.insert(p.id, false);
    buffer_packet(p, sender);
    return ForwardDecision::Buffered;
  }

  // Outside the area of interest. Greedy forwarding would immediately
  // relay packets believed to come from outside; with the suppression rule
  // active, packets that arrived on the broadcast link address are never
  // greedy-forwarded at all.
  ForwardDecision forward_non_area(GbcPacket& p, NodeId sender) {
    const LocationTableEntry* se = loct_.find(sender);
    if (se != nullptr && se->pv.has_value() &&
        p.area.containment(se->pv->position) >= 0.0) {
      // Believed to come from inside the area: someone in there is already
      // responsible for it.
      emit(TraceEvent::BorderDiscard, p.id, sender);
      return ForwardDecision::Discarded;
    }
    if (p.ll_dest.kind == LinkDestKind::Broadcast) {
      if (params_.suppression_active()) {
        emit(TraceEvent::GreedySuppressed, p.id, sender);
        return ForwardDecision::Discarded;
      }
    } else {
      // Multi-hop greedy relaying toward a remote area is not modelled;
      // a unicast hop ends here.
      emit(TraceEvent::GreedyNoNextHop, p.id, sender, 1);
      return ForwardDecision::Discarded;
    }

    const PositionVector ego = env_.ego_position();
    const double own_progress = distance(ego.position, p.area.center);
    NodeId best = 0;
    double best_dist = own_progress;
    bool found = false;
    loct_.for_each([&](NodeId node, const LocationTableEntry& e) {
      if (!e.is_neighbour || !e.pv.has_value() || node == self_) return;
      const double d = distance(e.pv->position, p.area.center);
      if (d < best_dist) {
        best_dist = d;
        best = node;
        found = true;
      }
    });
    if (!found) {
      emit(TraceEvent::GreedyNoNextHop, p.id, sender);
      return ForwardDecision::Discarded;
    }
    p.ll_dest = LinkDest::unicast(best);
    emit(TraceEvent::GreedyInjected, p.id, best);
    return ForwardDecision::TransmitNow;
  }

  void buffer_packet(const GbcPacket& p, NodeId sender) {
    const TimeUs now = env_.now();
    TimeUs deadline = now + stage_timer(sender);
    if (params_.algorithm == Algorithm::Fot)
      deadline = std::max(deadline, env_.gate_open_at());
    buffer_.insert(p, deadline, now);
    env_.set_cbf_timer(p.id, deadline);
    emit(TraceEvent::Buffered, p.id, sender);
  }

  // Distance-staged timer against the previous sender; maximum timer when
  // either position cannot be trusted.
  TimeUs stage_timer(NodeId sender) const {
    const PositionVector ego = env_.ego_position();
    const LocationTableEntry* se = loct_.find(sender);
    if (se != nullptr && se->pv.has_value() && se->pv->accurate && ego.accurate)
      return compute_cbf_timer(distance(se->pv->position, ego.position),
                               params_.cbf);
    return params_.cbf.t_max;
  }

  void cancel_entry(const PacketId& id) {
    buffer_.erase(id);
    env_.cancel_cbf_timer(id);
    emit(TraceEvent::Cancelled, id);
  }

  void park_in_scf(const GbcPacket& p, NodeId sender) {
    if (scf_.size() >= params_.scf_capacity) scf_.pop_front();
    scf_.push_back(Parked{p, sender, env_.now()});
    emit(TraceEvent::ScfParked, p.id, sender);
  }

  void flush_scf_if_neighbour() {
    if (scf_.empty() || !loct_.has_neighbour()) return;
    std::deque<Parked> parked;
    parked.swap(scf_);
    const TimeUs now = env_.now();
    const PositionVector ego = env_.ego_position();
    for (Parked& item : parked) {
      item.packet.lifetime_us -= now - item.parked_at;
      if (item.packet.lifetime_us <= 0 || now >= item.packet.expiry_at) {
        emit(TraceEvent::LifetimeDropped, item.packet.id);
        continue;
      }
      emit(TraceEvent::ScfFlushed, item.packet.id);
      const bool inside = item.packet.area.containment(ego.position) >= 0.0;
      const ForwardDecision decision =
          inside ? forward_area(item.packet, item.sender)
                 : forward_non_area(item.packet, item.sender);
      if (decision == ForwardDecision::TransmitNow)
        env_.release_to_dcc(item.packet, TcPriority::TC3);
    }
  }

  void drain_lifetime(CbfBufferEntry& entry, TimeUs now) {
    entry.packet.lifetime_us -= now - entry.inserted_at;
    entry.inserted_at = now;
  }

  void emit(TraceEvent event, const PacketId& id, NodeId other = 0,
            std::int32_t value = 0) {
    if (trace_ == nullptr) return;
    TraceRecord r;
    r.time = env_.now();
    r.node = self_;
    r.event = event;
    r.packet = id;
    r.other = other;
    r.value = value;
    trace_->on_record(r);
  }

  void trace_cancel_decision(const GbcPacket& p, NodeId sender, Position ego,
                             Position sender_pos, Position source_pos,
                             bool cancel) {
    if (trace_ == nullptr) return;
    TraceRecord r;
    r.time = env_.now();
    r.node = self_;
    r.event = TraceEvent::CancelDecision;
    r.packet = p.id;
    r.other = sender;
    r.value = cancel ? 1 : 0;
    r.ego_x = ego.x;
    r.ego_y = ego.y;
    r.sender_x = sender_pos.x;
    r.sender_y = sender_pos.y;
    r.source_x = source_pos.x;
    r.source_y = source_pos.y;
    trace_->on_record(r);
  }

  struct Parked {
    GbcPacket packet;
    NodeId sender = 0;
    TimeUs parked_at = 0;
  };

  NodeId self_;
  GeonetParams params_;
  GeonetEnv& env_;
  TraceSink* trace_;
  LocationTable loct_;
  DuplicatePacketList dpl_;
  CbfBuffer buffer_;
  std::deque<Parked> scf_;
};

}  // namespace cbfsim
