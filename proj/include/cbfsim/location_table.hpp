#pragma once

#include <optional>
#include <unordered_map>

#include "cbfsim/packet.hpp"

namespace cbfsim {

struct LocationTableEntry {
  std::optional<PositionVector> pv;
  bool is_neighbour = false;  // set only by direct single-hop reception
  TimeUs last_update = 0;
};

// Per-node table of known peers. Positions come from beacons and from the
// source position vector carried in network packets; neighbour status comes
// from hearing a station directly.
class LocationTable {
 public:
  const LocationTableEntry* find(NodeId node) const {
    auto it = entries_.find(node);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void update_position(NodeId node, const PositionVector& pv, TimeUs now) {
    LocationTableEntry& e = entries_[node];
    e.pv = pv;
    e.last_update = now;
  }

  void mark_neighbour(NodeId node, TimeUs now) {
    LocationTableEntry& e = entries_[node];
    if (!e.is_neighbour) {
      e.is_neighbour = true;
      ++neighbour_count_;
    }
    e.last_update = now;
  }

  bool has_neighbour() const { return neighbour_count_ > 0; }
  std::size_t size() const { return entries_.size(); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [node, entry] : entries_) fn(node, entry);
  }

 private:
  std::unordered_map<NodeId, LocationTableEntry> entries_;
  std::size_t neighbour_count_ = 0;
};

}  // namespace cbfsim
