#pragma once

#include "qsched/model.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsched {

/// Offline schedule: which packets are sent and when. Unassigned packets are
/// dropped on arrival; an assigned packet occupies the buffer from its
/// release step through its send step inclusive.
struct OfflineSchedule {
  std::map<PacketId, Time> assignment;
  Weight value{0};

  /// Packet sent at t, if any.
  std::optional<PacketId> sent_at(Time t) const;

  friend bool operator==(const OfflineSchedule&, const OfflineSchedule&) = default;
};

struct OracleLimits {
  std::size_t max_packets = 40;
  /// Distinct (time, committed-set) states the exact search may expand.
  std::size_t max_states = 4'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact offline optimum under the buffer-capacity constraint. Memoized
/// depth-first search over (time, committed packets); packets with equal
/// deadline and weight are interchangeable and branched on by count. Throws
/// BudgetExceeded rather than returning an approximation.
OfflineSchedule optimal_bounded(const Trace& trace, const OracleLimits& limits = {});

/// Exact optimum ignoring the capacity constraint.
OfflineSchedule optimal_unbounded(const Trace& trace);

/// Empty iff the schedule is one-per-step, inside every window, buffer
/// feasible, and its recorded value matches. Throws std::invalid_argument on
/// an unknown packet id.
std::vector<std::string> verify_schedule(const Trace& trace, const OfflineSchedule& schedule);

/// Up to `limit` distinct feasible schedules (all of them when fewer exist).
/// Packets are visited in trace order; each tries its send times in
/// ascending order before being left unsent, so fuller schedules come first.
std::vector<OfflineSchedule> enumerate_feasible(const Trace& trace, std::size_t limit);

}  // namespace qsched
