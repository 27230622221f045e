#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cbfsim/packet.hpp"

namespace cbfsim {

// Duplicate packet list: per-source circular record of recently seen
// sequence numbers. Eviction is strictly FIFO, so a sequence evicted from
// the window is treated as never seen. The new_added flag distinguishes a
// packet's first sight (still eligible for contention buffering) from a
// true duplicate.
class DuplicatePacketList {
 public:
  explicit DuplicatePacketList(std::size_t capacity_per_source = 32)
      : capacity_(capacity_per_source) {}

  bool contains(const PacketId& id) const { return find(id) != nullptr; }

  // True if the id is recorded with the new_added flag still set.
  bool is_new_added(const PacketId& id) const {
    const Record* r = find(id);
    return r != nullptr && r->new_added;
  }

  void clear_new_added(const PacketId& id) {
    if (Record* r = find_mut(id)) r->new_added = false;
  }

  // Records the id (evicting the oldest entry of that source if full).
  // Re-inserting an already known id just updates its flag.
  void insert(const PacketId& id, bool new_added) {
    if (Record* r = find_mut(id)) {
      r->new_added = new_added;
      return;
    }
    Ring& ring = rings_[id.source];
    if (ring.records.size() < capacity_) {
      ring.records.push_back({id.sequence, new_added});
    } else {
      ring.records[ring.head] = {id.sequence, new_added};
      ring.head = (ring.head + 1) % capacity_;
    }
  }

  std::size_t size(NodeId source) const {
    auto it = rings_.find(source);
    return it == rings_.end() ? 0 : it->second.records.size();
  }

 private:
  struct Record {
    std::uint32_t sequence = 0;
    bool new_added = false;
  };

  struct Ring {
    std::vector<Record> records;
    std::size_t head = 0;  // next slot to overwrite once full
  };

  const Record* find(const PacketId& id) const {
    auto it = rings_.find(id.source);
    if (it == rings_.end()) return nullptr;
    for (const Record& r : it->second.records)
      if (r.sequence == id.sequence) return &r;
    return nullptr;
  }

  Record* find_mut(const PacketId& id) {
    return const_cast<Record*>(find(id));
  }

  std::size_t capacity_;
  std::unordered_map<NodeId, Ring> rings_;
};

}  // namespace cbfsim
