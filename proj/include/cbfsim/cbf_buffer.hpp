#pragma once

#include <stdexcept>
#include <unordered_map>

#include "cbfsim/packet.hpp"

namespace cbfsim {

struct CbfBufferEntry {
  GbcPacket packet;
  TimeUs deadline = 0;
  TimeUs inserted_at = 0;  // start of the current network-layer dwell
};

// Contention buffer: at most one entry per packet id. Timer events are owned
// by the engine; the buffer only tracks the packet and its deadline.
class CbfBuffer {
 public:
  bool contains(const PacketId& id) const { return entries_.count(id) != 0; }

  CbfBufferEntry* find(const PacketId& id) {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Inserting an id that is already buffered is a protocol bug.
  CbfBufferEntry& insert(const GbcPacket& p, TimeUs deadline, TimeUs now) {
    auto [it, fresh] = entries_.try_emplace(p.id, CbfBufferEntry{p, deadline, now});
    if (!fresh) throw std::logic_error("cbf buffer: duplicate entry for packet id");
    return it->second;
  }

  void erase(const PacketId& id) { entries_.erase(id); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<PacketId, CbfBufferEntry, PacketIdHash> entries_;
};

}  // namespace cbfsim
