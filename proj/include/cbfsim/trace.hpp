#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "cbfsim/packet.hpp"
#include "cbfsim/sim_time.hpp"

namespace cbfsim {

enum class TraceEvent : std::uint8_t {
  DenmGenerated,
  CamGenerated,
  Received,
  Collided,
  Delivered,
  DuplicateDropped,  // dropped via the duplicate list
  Buffered,
  Cancelled,
  Rescheduled,
  TimerExpired,
  Rearmed,  // gate closed at expiry, timer moved to gate opening
  ScfParked,
  ScfFlushed,
  RhlDropped,
  LifetimeDropped,
  BorderDiscard,      // outside node dropped a packet sent from inside the area
  GreedyInjected,     // outside node re-injected a broadcast packet
  GreedySuppressed,   // broadcast link destination, suppression rule active
  GreedyNoNextHop,
  CancelDecision,  // geometric cancel-vs-reschedule evaluation
  DccEnqueued,
  DccDequeued,
  DccDropped,
  TxStart,
  TxEnd,
};

const char* trace_event_name(TraceEvent e);

// One structured record per protocol decision. The geometry fields are
// populated only for CancelDecision records (ego, sender, source positions
// in that order) so cancellation decisions can be replayed offline.
struct TraceRecord {
  TimeUs time = 0;
  NodeId node = 0;
  TraceEvent event = TraceEvent::Received;
  PacketId packet;      // zero for CAM-related records
  NodeId other = 0;     // sender / next hop, when meaningful
  std::int32_t value = 0;  // event-specific: tc, decision flag, rhl, ...
  double ego_x = 0, ego_y = 0;
  double sender_x = 0, sender_y = 0;
  double source_x = 0, source_y = 0;
};

inline const char* trace_event_name(TraceEvent e) {
  switch (e) {
    case TraceEvent::DenmGenerated: return "denm_gen";
    case TraceEvent::CamGenerated: return "cam_gen";
    case TraceEvent::Received: return "rx";
    case TraceEvent::Collided: return "rx_collision";
    case TraceEvent::Delivered: return "deliver";
    case TraceEvent::DuplicateDropped: return "dup_drop";
    case TraceEvent::Buffered: return "buffer";
    case TraceEvent::Cancelled: return "cancel";
    case TraceEvent::Rescheduled: return "resched";
    case TraceEvent::TimerExpired: return "expire";
    case TraceEvent::Rearmed: return "rearm";
    case TraceEvent::ScfParked: return "scf_park";
    case TraceEvent::ScfFlushed: return "scf_flush";
    case TraceEvent::RhlDropped: return "rhl_drop";
    case TraceEvent::LifetimeDropped: return "lifetime_drop";
    case TraceEvent::BorderDiscard: return "border_drop";
    case TraceEvent::GreedyInjected: return "greedy_inject";
    case TraceEvent::GreedySuppressed: return "greedy_suppress";
    case TraceEvent::GreedyNoNextHop: return "greedy_no_hop";
    case TraceEvent::CancelDecision: return "cancel_decision";
    case TraceEvent::DccEnqueued: return "dcc_enq";
    case TraceEvent::DccDequeued: return "dcc_deq";
    case TraceEvent::DccDropped: return "dcc_drop";
    case TraceEvent::TxStart: return "tx_start";
    case TraceEvent::TxEnd: return "tx_end";
  }
  return "unknown";
}

struct TraceSink {
  virtual ~TraceSink() = default;
  virtual void on_record(const TraceRecord& r) = 0;
};

// Collects records in memory; used by tests and the offline decision replay.
struct VectorTraceSink : TraceSink {
  std::vector<TraceRecord> records;
  void on_record(const TraceRecord& r) override { records.push_back(r); }
};

// Line-delimited JSON, one record per line. Field set is fixed so output is
// byte-stable for identical runs.
class JsonlTraceSink : public TraceSink {
 public:
  explicit JsonlTraceSink(std::FILE* out) : out_(out) {}

  void on_record(const TraceRecord& r) override {
    std::fprintf(out_,
                 "{\"time_us\":%lld,\"node\":%u,\"event\":\"%s\","
                 "\"packet_source\":%u,\"packet_seq\":%u,\"detail\":"
                 "{\"other\":%u,\"value\":%d",
                 static_cast<long long>(r.time), r.node, trace_event_name(r.event),
                 r.packet.source, r.packet.sequence, r.other, r.value);
    if (r.event == TraceEvent::CancelDecision) {
      std::fprintf(out_,
                   ",\"ego\":[%.3f,%.3f],\"sender\":[%.3f,%.3f],\"source\":[%.3f,%.3f]",
                   r.ego_x, r.ego_y, r.sender_x, r.sender_y, r.source_x, r.source_y);
    }
    std::fputs("}}\n", out_);
  }

 private:
  std::FILE* out_;
};

}  // namespace cbfsim
