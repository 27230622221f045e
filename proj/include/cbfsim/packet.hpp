#pragma once

#include <cstdint>
#include <functional>

#include "cbfsim/geometry.hpp"
#include "cbfsim/sim_time.hpp"

namespace cbfsim {

// Stable per-vehicle identifier, also used as the network source address.
using NodeId = std::uint32_t;

// (source, sequence) identifies a GeoBroadcast message network-wide.
struct PacketId {
  NodeId source = 0;
  std::uint32_t sequence = 0;

  friend bool operator==(const PacketId& a, const PacketId& b) {
    return a.source == b.source && a.sequence == b.sequence;
  }
};

struct PacketIdHash {
  std::size_t operator()(const PacketId& id) const {
    return std::hash<std::uint64_t>{}((std::uint64_t(id.source) << 32) | id.sequence);
  }
};

// Position plus the time it was sampled and whether the fix is trustworthy.
// An inaccurate position forces receivers onto the maximum-timer fallback.
struct PositionVector {
  Position position;
  TimeUs timestamp = 0;
  bool accurate = true;
};

// Network priorities, TC0 highest. Hazard notifications are TC0 at the
// source and TC3 when forwarded; awareness beacons are TC2.
enum class TcPriority : std::uint8_t { TC0 = 0, TC1 = 1, TC2 = 2, TC3 = 3 };

struct TrafficClass {
  TcPriority priority = TcPriority::TC3;
  bool scf = false;  // store-carry-forward bit
};

enum class LinkDestKind : std::uint8_t { Broadcast, Unicast };

struct LinkDest {
  LinkDestKind kind = LinkDestKind::Broadcast;
  NodeId node = 0;  // meaningful for Unicast only

  static LinkDest broadcast() { return {LinkDestKind::Broadcast, 0}; }
  static LinkDest unicast(NodeId n) { return {LinkDestKind::Unicast, n}; }
};

// GeoBroadcast network PDU. `lifetime_us` drains only while the packet is
// held at the network layer (contention buffer / SCF buffer); `expiry_at`
// is the absolute wall-clock validity bound fixed at generation.
struct GbcPacket {
  PacketId id;
  PositionVector source_pv;  // long position vector of the originator
  DestinationArea area;
  int rhl = 0;  // remaining hop limit
  TimeUs lifetime_us = 0;
  TimeUs expiry_at = time_never;
  TrafficClass tc;
  int size_bytes = 0;
  LinkDest ll_dest = LinkDest::broadcast();
  TimeUs generated_at = 0;
};

// Single-hop awareness beacon; terminal at receivers (updates the location
// table, nothing else).
struct CamFrame {
  NodeId sender = 0;
  PositionVector pv;
  int size_bytes = 0;
};

// Mirror of the forwarding-routine return contract (next_hop / 0 / -1).
enum class ForwardDecision : std::int8_t { TransmitNow, Buffered, Discarded };

}  // namespace cbfsim
