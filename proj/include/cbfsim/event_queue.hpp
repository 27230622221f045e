#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "cbfsim/sim_time.hpp"

namespace cbfsim {

// Min-heap of events ordered by (fire_at, insertion sequence). The sequence
// tiebreak makes same-time events fire in insertion order, which keeps runs
// reproducible regardless of heap internals.
template <typename Payload>
class EventQueue {
 public:
  struct Item {
    TimeUs at = 0;
    std::uint64_t seq = 0;
    Payload payload{};
  };

  std::uint64_t push(TimeUs at, Payload payload) {
    const std::uint64_t seq = next_seq_++;
    heap_.push(Item{at, seq, std::move(payload)});
    return seq;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Item& top() const { return heap_.top(); }

  Item pop() {
    Item item = heap_.top();
    heap_.pop();
    return item;
  }

 private:
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Item, std::vector<Item>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace cbfsim
