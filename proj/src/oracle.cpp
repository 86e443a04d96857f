#include "qsched/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <unordered_map>

namespace qsched {

std::optional<PacketId> OfflineSchedule::sent_at(Time t) const {
  for (const auto& [id, when] : assignment) {
    if (when == t) return id;
  }
  return std::nullopt;
}

namespace {

using Mask = std::uint64_t;

class BoundedSearch {
 public:
  BoundedSearch(const Trace& trace, const OracleLimits& limits)
      : packets_(trace.packets()),
        horizon_(trace.horizon()),
        capacity_(trace.buffer_size()),
        limits_(limits),
        arrivals_(static_cast<std::size_t>(horizon_) + 2, 0),
        memo_(static_cast<std::size_t>(horizon_) + 2) {
    if (packets_.size() > limits_.max_packets || packets_.size() > 63) {
      throw BudgetExceeded("optimal_bounded: " + std::to_string(packets_.size()) + " packets exceed the limit of " +
                           std::to_string(std::min<std::size_t>(limits_.max_packets, 63)));
    }
    for (std::size_t i = 0; i < packets_.size(); ++i) {
      arrivals_[static_cast<std::size_t>(packets_[i].release)] |= Mask{1} << i;
    }
    // Arrivals with equal deadline and weight are interchangeable, so only
    // how many of each class are admitted matters.
    classes_.resize(arrivals_.size());
    for (std::size_t t = 0; t < arrivals_.size(); ++t) {
      auto& groups = classes_[t];
      for (Mask m = arrivals_[t]; m; m &= m - 1) {
        const int i = std::countr_zero(m);
        auto same = [&](const std::vector<int>& g) { return interchangeable(g.front(), i); };
        if (auto it = std::find_if(groups.begin(), groups.end(), same); it != groups.end()) {
          it->push_back(i);
        } else {
          groups.push_back({i});
        }
      }
    }
  }

  OfflineSchedule solve() {
    OfflineSchedule schedule;
    auto best = value(1, 0);
    // The all-idle, drop-everything path is always feasible.
    schedule.value = best.value_or(Weight(0));
    Mask committed = 0;
    for (Time t = 1; t <= horizon_; ++t) {
      const Entry& e = memo_[static_cast<std::size_t>(t)].at(committed);
      Mask held = committed | e.admit;
      if (e.send >= 0) {
        schedule.assignment[packets_[static_cast<std::size_t>(e.send)].id] = t;
        held &= ~(Mask{1} << e.send);
      }
      committed = held;
    }
    return schedule;
  }

 private:
  struct Entry {
    std::optional<Weight> value;
    Mask admit = 0;
    int send = -1;
  };

  std::optional<Weight> value(Time t, Mask committed) {
    if (t > horizon_) return committed == 0 ? std::optional<Weight>(0) : std::nullopt;
    auto& table = memo_[static_cast<std::size_t>(t)];
    if (auto it = table.find(committed); it != table.end()) return it->second.value;
    if (++states_ > limits_.max_states) {
      throw BudgetExceeded("optimal_bounded: search exceeded " + std::to_string(limits_.max_states) + " states");
    }

    Entry best;
    admit_classes(t, committed, 0, 0, capacity_ - std::popcount(committed), best);
    table.emplace(committed, best);
    return best.value;
  }

  bool interchangeable(int a, int b) const {
    const Packet& p = packets_[static_cast<std::size_t>(a)];
    const Packet& q = packets_[static_cast<std::size_t>(b)];
    return p.deadline == q.deadline && p.weight == q.weight;
  }

  // Every choice of how many packets of each arrival class to retain, taking
  // the lowest indices of a class first.
  void admit_classes(Time t, Mask committed, std::size_t group, Mask admit, int room, Entry& best) {
    const auto& groups = classes_[static_cast<std::size_t>(t)];
    if (group == groups.size()) {
      consider(t, committed | admit, admit, best);
      return;
    }
    admit_classes(t, committed, group + 1, admit, room, best);
    const auto& members = groups[group];
    for (std::size_t k = 0; k < members.size() && static_cast<int>(k) < room; ++k) {
      admit |= Mask{1} << members[k];
      admit_classes(t, committed, group + 1, admit, room - static_cast<int>(k) - 1, best);
    }
  }

  void consider(Time t, Mask held, Mask admit, Entry& best) {
    Mask due = 0;
    for (Mask m = held; m; m &= m - 1) {
      int i = std::countr_zero(m);
      if (packets_[static_cast<std::size_t>(i)].deadline == t) due |= Mask{1} << i;
    }
    if (std::popcount(due) > 1) return;

    auto try_send = [&](int i) {
      Mask rest = i < 0 ? held : held & ~(Mask{1} << i);
      auto future = value(t + 1, rest);
      if (!future) return;
      Weight total = *future + (i < 0 ? Weight(0) : packets_[static_cast<std::size_t>(i)].weight);
      if (!best.value || total > *best.value) best = {total, admit, i};
    };
    if (due) {
      try_send(std::countr_zero(due));
      return;
    }
    try_send(-1);
    std::vector<int> tried;
    for (Mask m = held; m; m &= m - 1) {
      const int i = std::countr_zero(m);
      if (std::any_of(tried.begin(), tried.end(), [&](int j) { return interchangeable(i, j); })) continue;
      tried.push_back(i);
      try_send(i);
    }
  }

  const std::vector<Packet>& packets_;
  Time horizon_;
  int capacity_;
  OracleLimits limits_;
  std::vector<Mask> arrivals_;
  std::vector<std::vector<std::vector<int>>> classes_;
  std::vector<std::unordered_map<Mask, Entry>> memo_;
  std::size_t states_ = 0;
};

/// Earliest-deadline-first over unit jobs; returns send times or nullopt if
/// some job misses its deadline. EDF is exact for this feasibility question.
std::optional<std::map<PacketId, Time>> edf_assign(const std::vector<Packet>& jobs) {
  std::vector<Packet> sorted = jobs;
  std::sort(sorted.begin(), sorted.end(), [](const Packet& a, const Packet& b) { return a.release < b.release; });
  using Item = std::pair<Time, PacketId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  std::map<PacketId, Time> out;
  std::size_t next = 0;
  Time t = sorted.empty() ? 0 : sorted.front().release;
  while (next < sorted.size() || !ready.empty()) {
    if (ready.empty() && t < sorted[next].release) t = sorted[next].release;
    while (next < sorted.size() && sorted[next].release <= t) {
      ready.emplace(sorted[next].deadline, sorted[next].id);
      ++next;
    }
    auto [deadline, id] = ready.top();
    ready.pop();
    if (deadline < t) return std::nullopt;
    out[id] = t;
    ++t;
  }
  return out;
}

}  // namespace

OfflineSchedule optimal_bounded(const Trace& trace, const OracleLimits& limits) {
  return BoundedSearch(trace, limits).solve();
}

OfflineSchedule optimal_unbounded(const Trace& trace) {
  // Feasible job sets form a matroid, so heaviest-first greedy is exact.
  std::vector<Packet> order = trace.packets();
  std::sort(order.begin(), order.end(), [](const Packet& a, const Packet& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
  });
  std::vector<Packet> chosen;
  for (const Packet& p : order) {
    chosen.push_back(p);
    if (!edf_assign(chosen)) chosen.pop_back();
  }
  OfflineSchedule schedule;
  schedule.assignment = *edf_assign(chosen);
  for (const Packet& p : chosen) schedule.value += p.weight;
  return schedule;
}

std::vector<std::string> verify_schedule(const Trace& trace, const OfflineSchedule& schedule) {
  std::vector<std::string> violations;
  std::map<Time, PacketId> by_time;
  std::vector<int> occupancy(static_cast<std::size_t>(trace.horizon()) + 2, 0);
  Weight value{0};
  for (const auto& [id, when] : schedule.assignment) {
    const Packet* p = trace.find(id);
    if (!p) throw std::invalid_argument("schedule assigns unknown packet id " + std::to_string(id));
    value += p->weight;
    if (when < p->release || when > p->deadline) {
      violations.push_back("window: packet " + std::to_string(id) + " sent at " + std::to_string(when) +
                           " outside [" + std::to_string(p->release) + ", " + std::to_string(p->deadline) + "]");
      continue;
    }
    if (auto [it, fresh] = by_time.emplace(when, id); !fresh) {
      violations.push_back("injective: packets " + std::to_string(it->second) + " and " + std::to_string(id) +
                           " both sent at " + std::to_string(when));
    }
    for (Time t = p->release; t <= when; ++t) ++occupancy[static_cast<std::size_t>(t)];
  }
  for (Time t = 1; t <= trace.horizon(); ++t) {
    if (occupancy[static_cast<std::size_t>(t)] > trace.buffer_size()) {
      violations.push_back("occupancy " + std::to_string(occupancy[static_cast<std::size_t>(t)]) + " at t=" +
                           std::to_string(t) + " exceeds B=" + std::to_string(trace.buffer_size()));
    }
  }
  if (value != schedule.value) {
    violations.push_back("value: recorded " + format_weight(schedule.value) + ", actual " + format_weight(value));
  }
  return violations;
}

std::vector<OfflineSchedule> enumerate_feasible(const Trace& trace, std::size_t limit) {
  std::vector<OfflineSchedule> out;
  if (limit == 0) return out;
  const auto& packets = trace.packets();
  const int capacity = trace.buffer_size();
  std::vector<int> occupancy(static_cast<std::size_t>(trace.horizon()) + 2, 0);
  std::set<Time> used;
  OfflineSchedule current;

  std::function<void(std::size_t)> visit = [&](std::size_t index) {
    if (out.size() >= limit) return;
    if (index == packets.size()) {
      out.push_back(current);
      return;
    }
    const Packet& p = packets[index];
    for (Time when = p.release; when <= p.deadline && out.size() < limit; ++when) {
      if (used.count(when)) continue;
      bool fits = true;
      for (Time t = p.release; t <= when; ++t) fits = fits && occupancy[static_cast<std::size_t>(t)] < capacity;
      if (!fits) continue;
      for (Time t = p.release; t <= when; ++t) ++occupancy[static_cast<std::size_t>(t)];
      used.insert(when);
      current.assignment[p.id] = when;
      current.value += p.weight;
      visit(index + 1);
      current.value -= p.weight;
      current.assignment.erase(p.id);
      used.erase(when);
      for (Time t = p.release; t <= when; ++t) --occupancy[static_cast<std::size_t>(t)];
    }
    visit(index + 1);
  };
  visit(0);
  return out;
}

}  // namespace qsched
