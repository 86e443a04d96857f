#pragma once

// Test-only reference oracle. Tries every assignment of packets to
// {unsent} U [release, deadline] and keeps the feasible ones. Exponential;
// only for a handful of packets. Shares no code with the library's search.

#include "qsched/model.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace qsched::testing {

struct BruteForceResult {
  Weight best{0};
  std::size_t feasible_count = 0;
  std::vector<std::map<PacketId, Time>> feasible;  // only filled when collect=true
};

inline bool brute_feasible(const std::vector<Packet>& packets, const std::vector<std::optional<Time>>& when,
                           int capacity) {
  std::map<Time, int> per_step;
  std::map<Time, int> occupancy;
  for (std::size_t i = 0; i < packets.size(); ++i) {
    if (!when[i]) continue;
    if (++per_step[*when[i]] > 1) return false;
    for (Time t = packets[i].release; t <= *when[i]; ++t) {
      if (++occupancy[t] > capacity) return false;
    }
  }
  return true;
}

/// capacity < 0 means unbounded.
inline BruteForceResult brute_force(const Trace& trace, bool collect = false, int capacity_override = 0) {
  const auto& packets = trace.packets();
  const int capacity = capacity_override < 0 ? static_cast<int>(packets.size()) + 1
                       : capacity_override > 0 ? capacity_override
                                               : trace.buffer_size();
  BruteForceResult result;
  std::vector<std::optional<Time>> when(packets.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == packets.size()) {
      if (!brute_feasible(packets, when, capacity)) return;
      ++result.feasible_count;
      Weight value{0};
      std::map<PacketId, Time> assignment;
      for (std::size_t k = 0; k < packets.size(); ++k) {
        if (when[k]) {
          value += packets[k].weight;
          assignment[packets[k].id] = *when[k];
        }
      }
      if (value > result.best) result.best = value;
      if (collect) result.feasible.push_back(assignment);
      return;
    }
    when[i].reset();
    rec(i + 1);
    for (Time t = packets[i].release; t <= packets[i].deadline; ++t) {
      when[i] = t;
      rec(i + 1);
    }
    when[i].reset();
  };
  rec(0);
  return result;
}

inline Trace trace_of(int b, std::vector<Packet> packets) {
  return make_trace({b, std::move(packets)});
}

}  // namespace qsched::testing
