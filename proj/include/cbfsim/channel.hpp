#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cbfsim/dcc.hpp"
#include "cbfsim/packet.hpp"
#include "cbfsim/sim_time.hpp"

namespace cbfsim {

struct RadioParams {
  double tx_power_mw = 20.0;
  double pathloss_exponent = 2.0;
  std::int64_t datarate_bps = 6'000'000;
  // Reception threshold calibrated so a sole transmission is decodable at
  // exactly max_range_m and not beyond (deterministic unit disc).
  double max_range_m = 778.0;
  // Carrier sensing and interference extend past the decode range.
  double carrier_sense_factor = 1.5;
  TimeUs preamble_us = 40;
  TimeUs aifs_us = 58;
  TimeUs slot_us = 13;
  int contention_window = 15;

  double carrier_sense_range() const { return max_range_m * carrier_sense_factor; }
};

// Frame time on air: fixed preamble overhead plus payload bits at the data
// rate, rounded up to whole microseconds.
inline TimeUs airtime(int size_bytes, const RadioParams& p) {
  const std::int64_t bits = static_cast<std::int64_t>(size_bytes) * 8;
  const TimeUs payload = (bits * 1'000'000 + p.datarate_bps - 1) / p.datarate_bps;
  return p.preamble_us + payload;
}

struct Transmission {
  std::uint32_t tx_id = 0;
  NodeId sender = 0;
  TimeUs start = 0;
  TimeUs end = 0;
  Position origin;       // sender position frozen at transmission start
  double range = 0.0;    // decode range for this transmission
  double cs_range = 0.0; // interference / sensing range
  AccessFrame frame;
  // Nodes within decode range at start, with their positions snapshotted.
  std::vector<std::pair<NodeId, Position>> candidates;
};

// The shared broadcast medium. Response to overlap is pessimistic: any two
// transmissions that overlap in time destroy each other at every common
// receiver within interference range (no capture).
class Channel {
 public:
  explicit Channel(const RadioParams& params) : params_(params) {}

  const RadioParams& params() const { return params_; }

  // Per-node decode range override (used by scripted topologies to model
  // asymmetric coverage). Sensing range scales accordingly.
  void set_range_override(NodeId node, double range_m) {
    range_override_[node] = range_m;
  }

  double range_for(NodeId node) const {
    auto it = range_override_.find(node);
    return it == range_override_.end() ? params_.max_range_m : it->second;
  }

  Transmission& begin(NodeId sender, TimeUs start, TimeUs end, Position origin,
                      AccessFrame frame,
                      std::vector<std::pair<NodeId, Position>> candidates) {
    Transmission tx;
    tx.tx_id = next_id_++;
    tx.sender = sender;
    tx.start = start;
    tx.end = end;
    tx.origin = origin;
    tx.range = range_for(sender);
    tx.cs_range = tx.range * params_.carrier_sense_factor;
    tx.frame = std::move(frame);
    tx.candidates = std::move(candidates);
    active_.push_back(std::move(tx));
    return active_.back();
  }

  struct Outcome {
    std::vector<std::pair<NodeId, Position>> delivered;
    std::vector<NodeId> collided;
  };

  // Resolves receptions for the transmission ending now. A candidate loses
  // the frame if it was itself transmitting during the frame, or if any
  // other overlapping transmission reaches it with interference.
  Outcome finish(std::uint32_t tx_id) {
    const Transmission* tx = find(tx_id);
    Outcome out;
    if (tx == nullptr) return out;
    for (const auto& [node, pos] : tx->candidates) {
      if (node == tx->sender) continue;
      bool destroyed = false;
      for (const Transmission& other : active_) {
        if (other.tx_id == tx->tx_id) continue;
        if (!overlaps(*tx, other)) continue;
        if (other.sender == node ||
            distance(other.origin, pos) <= other.cs_range) {
          destroyed = true;
          break;
        }
      }
      if (destroyed)
        out.collided.push_back(node);
      else
        out.delivered.emplace_back(node, pos);
    }
    return out;
  }

  // Sensing: busy if any transmission that started strictly before `now` is
  // still on air within sensing range of `pos`. Same-microsecond starts are
  // not yet sensed, so two stations released in the same tick do collide.
  bool busy_at(Position pos, TimeUs now) const {
    for (const Transmission& tx : active_) {
      if (tx.start < now && tx.end > now &&
          distance(tx.origin, pos) <= tx.cs_range)
        return true;
    }
    return false;
  }

  // Latest end time among transmissions audible at `pos`; `now` if idle.
  TimeUs idle_at(Position pos, TimeUs now) const {
    TimeUs idle = now;
    for (const Transmission& tx : active_) {
      if (tx.start < now && tx.end > now &&
          distance(tx.origin, pos) <= tx.cs_range)
        idle = std::max(idle, tx.end);
    }
    return idle;
  }

  // Drops finished transmissions that can no longer interfere with any
  // transmission still on air and have already been resolved.
  void prune(TimeUs now) {
    TimeUs horizon = now;
    for (const Transmission& tx : active_)
      if (tx.end > now) horizon = std::min(horizon, tx.start);
    std::erase_if(active_, [&](const Transmission& tx) {
      return tx.end < now && tx.end <= horizon;
    });
  }

  const std::vector<Transmission>& active() const { return active_; }

 private:
  static bool overlaps(const Transmission& a, const Transmission& b) {
    return a.start < b.end && b.start < a.end;
  }

  const Transmission* find(std::uint32_t tx_id) const {
    for (const Transmission& tx : active_)
      if (tx.tx_id == tx_id) return &tx;
    return nullptr;
  }

  RadioParams params_;
  std::vector<Transmission> active_;
  std::unordered_map<NodeId, double> range_override_;
  std::uint32_t next_id_ = 0;
};

}  // namespace cbfsim
