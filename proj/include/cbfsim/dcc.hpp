#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <optional>
#include <variant>
#include <vector>

#include "cbfsim/packet.hpp"
#include "cbfsim/sim_time.hpp"

namespace cbfsim {

// A frame waiting at the access layer: either a beacon or a network PDU.
struct AccessFrame {
  std::variant<CamFrame, GbcPacket> payload;
  TcPriority tc = TcPriority::TC3;

  bool is_cam() const { return std::holds_alternative<CamFrame>(payload); }
  const GbcPacket& gbc() const { return std::get<GbcPacket>(payload); }
  const CamFrame& cam() const { return std::get<CamFrame>(payload); }
  int size_bytes() const {
    return is_cam() ? cam().size_bytes : gbc().size_bytes;
  }
};

struct DccParams {
  TimeUs gate_min = millis(25);
  TimeUs gate_max = millis(1000);
  // Linear rate control, updated once per two busy-ratio windows.
  double alpha = 0.1;
  double beta = 0.025;
  double cbr_target = 0.68;
  double delta_min = 0.0004;
  double delta_max = 0.03;
  std::size_t queue_capacity = 4;  // per traffic class
  TimeUs cbr_window = millis(100);
};

// Measures the fraction of time this node senses the channel busy.
// Overlapping busy intervals are merged; time past the current window
// boundary carries into the next window.
class CbrMeter {
 public:
  void sense_busy(TimeUs start, TimeUs end) {
    const TimeUs from = std::max(start, busy_until_);
    if (end > from) {
      accum_ += end - from;
      busy_until_ = end;
    }
  }

  // Closes the window ending at `window_end` and returns its busy fraction.
  double close_window(TimeUs window_end, TimeUs window_len) {
    const TimeUs carry = std::max<TimeUs>(0, busy_until_ - window_end);
    const TimeUs busy = std::max<TimeUs>(0, accum_ - carry);
    accum_ = carry;
    return static_cast<double>(std::min(busy, window_len)) /
           static_cast<double>(window_len);
  }

 private:
  TimeUs busy_until_ = 0;
  TimeUs accum_ = 0;
};

// Adaptive transmit-rate gatekeeper. Frames wait in per-priority FIFO
// queues; after each transmission the gate closes for a period derived from
// the current permitted rate share, always within [gate_min, gate_max].
class DccGatekeeper {
 public:
  explicit DccGatekeeper(const DccParams& params = {})
      : params_(params), delta_(params.delta_max) {}

  // Time of the next permitted transmission; the epoch (0) means the gate
  // has never closed. Exposed to the network layer through the cross-layer
  // management view.
  TimeUs gate_open_at() const { return t_go_; }
  bool gate_open(TimeUs now) const { return now >= t_go_; }

  struct EnqueueResult {
    std::optional<AccessFrame> dropped;  // oldest frame of the class, on overflow
  };

  EnqueueResult enqueue(AccessFrame frame, TimeUs now) {
    Queue& q = queues_[static_cast<std::size_t>(frame.tc)];
    EnqueueResult result;
    if (q.size() >= params_.queue_capacity) {
      result.dropped = std::move(q.front().frame);
      q.pop_front();
    }
    q.push_back(Queued{std::move(frame), now});
    return result;
  }

  bool has_pending() const {
    for (const Queue& q : queues_)
      if (!q.empty()) return true;
    return false;
  }

  struct Released {
    AccessFrame frame;
    TimeUs queued_at = 0;
  };

  // Pops the highest-priority frame, discarding expired packets on the way
  // out. Strict priority: a TC3 frame is released only when TC0..TC2 are
  // all empty at this instant.
  struct DequeueResult {
    std::optional<Released> released;
    std::vector<AccessFrame> expired;
  };

  DequeueResult dequeue(TimeUs now) {
    DequeueResult result;
    for (Queue& q : queues_) {
      while (!q.empty()) {
        Queued item = std::move(q.front());
        q.pop_front();
        if (!item.frame.is_cam() && now >= item.frame.gbc().expiry_at) {
          result.expired.push_back(std::move(item.frame));
          continue;
        }
        result.released = Released{std::move(item.frame), item.enqueued_at};
        return result;
      }
    }
    return result;
  }

  // Called when a frame from this node finishes transmitting.
  void on_transmission_complete(TimeUs now, TimeUs frame_airtime) {
    t_go_ = now + gap_for(frame_airtime);
  }

  TimeUs gap_for(TimeUs frame_airtime) const {
    const double raw = static_cast<double>(frame_airtime) / delta_;
    const TimeUs gap = static_cast<TimeUs>(std::llround(raw));
    return std::clamp(gap, params_.gate_min, params_.gate_max);
  }

  // One busy-ratio sample per window; every second sample the smoothed
  // value drives the linear control law. Fixed point at the target load.
  void on_cbr_sample(double busy_fraction) {
    if (!pending_sample_) {
      pending_sample_ = busy_fraction;
      return;
    }
    const double smoothed = (*pending_sample_ + busy_fraction) / 2.0;
    pending_sample_.reset();
    update_rate(smoothed);
  }

  void update_rate(double cbr_measured) {
    delta_ = (1.0 - params_.alpha) * delta_ +
             params_.beta * (params_.cbr_target - cbr_measured);
    delta_ = std::clamp(delta_, params_.delta_min, params_.delta_max);
  }

  double delta() const { return delta_; }
  const DccParams& params() const { return params_; }
  std::size_t queue_depth(TcPriority tc) const {
    return queues_[static_cast<std::size_t>(tc)].size();
  }

 private:
  struct Queued {
    AccessFrame frame;
    TimeUs enqueued_at = 0;
  };
  using Queue = std::deque<Queued>;

  DccParams params_;
  std::array<Queue, 4> queues_;
  TimeUs t_go_ = 0;
  double delta_;
  std::optional<double> pending_sample_;
};

}  // namespace cbfsim
