#include "qsched/charging.hpp"

#include <algorithm>
#include <set>

namespace qsched {

const char* to_string(ChargeKind kind) {
  switch (kind) {
    case ChargeKind::kSelf: return "S";
    case ChargeKind::kDownward: return "D";
    case ChargeKind::kForward: return "F";
  }
  return "?";
}

namespace {

std::vector<std::pair<Time, PacketId>> adversary_sends(const OfflineSchedule& adversary) {
  std::vector<std::pair<Time, PacketId>> sends;
  for (const auto& [id, when] : adversary.assignment) sends.emplace_back(when, id);
  std::sort(sends.begin(), sends.end());
  return sends;
}

Weight grq_weight_at(const Transcript& grq, Time t) {
  if (t < 1 || t > grq.horizon()) return Weight(0);
  return grq.at(t).sent_weight();
}

bool grq_sends_at(const Transcript& grq, Time t) {
  return t >= 1 && t <= grq.horizon() && grq.at(t).sent.has_value();
}

std::string describe(const Charge& c) {
  std::string s = std::string(to_string(c.kind)) + "-charge of packet " + std::to_string(c.packet) + " (w=" +
                  format_weight(c.weight) + ", adversary t=" + std::to_string(c.source_time);
  if (c.rejection_time) s += ", t0=" + std::to_string(*c.rejection_time);
  if (c.target) s += ", target=" + std::to_string(*c.target);
  return s + ")";
}

}  // namespace

std::vector<Charge> classify_charges(const Trace& trace, const Transcript& grq, const OfflineSchedule& adversary) {
  std::vector<Charge> charges;
  for (const auto& [t, id] : adversary_sends(adversary)) {
    Charge c;
    c.source_time = t;
    c.packet = id;
    c.weight = trace.packet(id).weight;
    if (auto sent = grq.send_time(id); sent && *sent < t) {
      c.kind = ChargeKind::kSelf;
      c.target = *sent;
    } else if (c.weight <= grq_weight_at(grq, t)) {
      c.kind = ChargeKind::kDownward;
      c.target = t;
    } else {
      c.kind = ChargeKind::kForward;
      c.rejection_time = grq.rejection_time(id);
      if (!c.rejection_time) throw ChargingError("no GRQ rejection recorded for " + describe(c));
    }
    charges.push_back(c);
  }
  return charges;
}

ChargeMap assign_f_charges(const Transcript& grq, std::vector<Charge> classified) {
  ChargeMap map;
  std::vector<Charge> forward;
  for (Charge& c : classified) {
    if (c.kind == ChargeKind::kForward) {
      forward.push_back(c);
    } else {
      ++map.per_target[*c.target];
      map.charges.push_back(c);
    }
  }
  std::stable_sort(forward.begin(), forward.end(), [](const Charge& a, const Charge& b) {
    return std::tie(*a.rejection_time, a.source_time) < std::tie(*b.rejection_time, b.source_time);
  });

  const int B = grq.buffer_size;
  for (Charge& c : forward) {
    const Time t0 = *c.rejection_time;
    std::optional<Time> slot;
    for (Time t = t0; t <= grq.horizon(); ++t) {
      if (grq_sends_at(grq, t) && map.per_target[t] < 2) {
        slot = t;
        break;
      }
    }
    if (!slot || *slot > t0 + B - 1) {
      throw ChargingError("no GRQ step in [" + std::to_string(t0) + ", " + std::to_string(t0 + B - 1) +
                          "] has room for " + describe(c));
    }
    c.target = slot;
    ++map.per_target[*slot];
    map.charges.push_back(c);
  }
  return map;
}

bool ChargeReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void ChargeReport::fail(std::size_t check, std::string message) {
  checks[check].passed = false;
  checks[check].failures.push_back(std::move(message));
}

namespace {

ChargeReport empty_report(const Trace& trace, const Transcript& grq, const OfflineSchedule& adversary) {
  ChargeReport report;
  static constexpr const char* kNames[ChargeReport::kChecks] = {
      "coverage", "two_per_target", "weight_domination", "forward_window",
      "rejection_buffer", "counting", "value_bound"};
  for (std::size_t i = 0; i < ChargeReport::kChecks; ++i) report.checks[i].name = kNames[i];
  report.grq_value = grq.total;
  for (const auto& [id, when] : adversary.assignment) report.adversary_value += trace.packet(id).weight;
  return report;
}

}  // namespace

ChargeReport verify_charge_map(const Trace& trace, const ChargeMap& map, const Transcript& grq,
                               const OfflineSchedule& adversary) {
  ChargeReport report = empty_report(trace, grq, adversary);
  const int B = trace.buffer_size();

  // (1) every adversary transmission is the source of exactly one charge
  std::map<std::pair<Time, PacketId>, int> sources;
  for (const Charge& c : map.charges) ++sources[{c.source_time, c.packet}];
  for (const auto& [t, id] : adversary_sends(adversary)) {
    auto it = sources.find({t, id});
    int n = it == sources.end() ? 0 : it->second;
    if (n != 1) {
      report.fail(0, "adversary send of packet " + std::to_string(id) + " at t=" + std::to_string(t) + " has " +
                         std::to_string(n) + " charges");
    }
    if (it != sources.end()) sources.erase(it);
  }
  for (const auto& [key, n] : sources) {
    report.fail(0, "charge from packet " + std::to_string(key.second) + " at t=" + std::to_string(key.first) +
                       " has no adversary transmission");
  }

  // (2) targets are GRQ transmissions and absorb at most two charges
  std::map<Time, int> counts;
  std::map<Time, Weight> absorbed;
  for (const Charge& c : map.charges) {
    if (c.kind == ChargeKind::kSelf) ++report.s_charges;
    if (c.kind == ChargeKind::kDownward) ++report.d_charges;
    if (c.kind == ChargeKind::kForward) ++report.f_charges;
    if (!c.target) {
      report.fail(1, describe(c) + " has no target");
      continue;
    }
    ++counts[*c.target];
    absorbed[*c.target] += c.weight;
    // A zero-weight packet may be charged to an idle step; it carries nothing.
    if (!grq_sends_at(grq, *c.target) && c.weight != 0) report.fail(1, describe(c) + " targets an idle GRQ step");
  }
  for (const auto& [t, n] : counts) {
    if (n > 2) report.fail(1, "GRQ step " + std::to_string(t) + " receives " + std::to_string(n) + " charges");
  }

  // (3) weight domination, plus the kind-specific target rules
  for (const Charge& c : map.charges) {
    if (!c.target) continue;
    if (c.weight > grq_weight_at(grq, *c.target)) {
      report.fail(2, describe(c) + " outweighs GRQ's transmission " + format_weight(grq_weight_at(grq, *c.target)));
    }
    if (c.kind == ChargeKind::kSelf) {
      const auto sent = grq_sends_at(grq, *c.target) ? grq.at(*c.target).sent : std::nullopt;
      if (!sent || sent->id != c.packet || *c.target >= c.source_time) {
        report.fail(2, describe(c) + " does not point at an earlier GRQ send of the same packet");
      }
    }
    if (c.kind == ChargeKind::kDownward && *c.target != c.source_time) {
      report.fail(2, describe(c) + " is not at its own time step");
    }
  }

  // (4) forward window and (5) buffer weights at the rejection time
  for (const Charge& c : map.charges) {
    if (c.kind != ChargeKind::kForward) continue;
    if (!c.rejection_time) {
      report.fail(3, describe(c) + " has no rejection time");
      continue;
    }
    const Time t0 = *c.rejection_time;
    if (t0 + B > c.source_time) report.fail(3, describe(c) + " violates t0 + B <= adversary time");
    if (!c.target || *c.target < t0 || *c.target > t0 + B - 1) {
      report.fail(3, describe(c) + " lands outside [t0, t0+B-1]");
    }
    if (grq.rejection_time(c.packet) != t0) report.fail(4, describe(c) + " t0 disagrees with the GRQ transcript");
    if (t0 < 1 || t0 > grq.horizon()) {
      report.fail(4, describe(c) + " t0 outside transcript");
      continue;
    }
    for (const Packet& p : grq.at(t0).buffer.packets()) {
      if (p.weight < c.weight) {
        report.fail(4, describe(c) + ": slot packet " + std::to_string(p.id) + " at t0 weighs only " +
                           format_weight(p.weight));
      }
    }
  }

  // (6) counting inequalities for every t0 with forward activity
  std::set<Time> forward_times;
  for (const Charge& c : map.charges) {
    if (c.kind == ChargeKind::kForward && c.rejection_time) forward_times.insert(*c.rejection_time);
  }
  for (Time t0 : forward_times) {
    const Time last = t0 + B - 1;
    int g1 = 0, g2 = 0, d = 0, s1 = 0, s2 = 0, f = 0;
    for (const Charge& c : map.charges) {
      const bool in_window = c.target && *c.target >= t0 && *c.target <= last;
      const bool source_in_window = c.source_time <= last;
      switch (c.kind) {
        case ChargeKind::kDownward:
          d += in_window;
          break;
        case ChargeKind::kSelf:
          if (in_window) (source_in_window ? s1 : s2) += 1;
          break;
        case ChargeKind::kForward:
          if (c.rejection_time == t0) {
            ++f;
          } else if (c.rejection_time && *c.rejection_time < t0 && c.target && *c.target >= t0) {
            (source_in_window ? g1 : g2) += 1;
          }
          break;
      }
    }
    if (g1 + d + s1 > B) {
      report.fail(5, "t0=" + std::to_string(t0) + ": |G1|+|D|+|S1| = " + std::to_string(g1 + d + s1) + " > B");
    }
    if (g2 + f + s2 > B) {
      report.fail(5, "t0=" + std::to_string(t0) + ": |G2|+|F|+|S2| = " + std::to_string(g2 + f + s2) + " > B");
    }
  }

  // (7) per-target and total value bound
  for (const auto& [t, w] : absorbed) {
    if (w > 2 * grq_weight_at(grq, t)) {
      report.fail(6, "GRQ step " + std::to_string(t) + " absorbs " + format_weight(w) + " > 2 x " +
                         format_weight(grq_weight_at(grq, t)));
    }
  }
  Weight charged{0};
  for (const Charge& c : map.charges) charged += c.weight;
  if (charged != report.adversary_value) {
    report.fail(6, "charged weight " + format_weight(charged) + " != adversary value " +
                       format_weight(report.adversary_value));
  }
  if (report.adversary_value > 2 * report.grq_value) {
    report.fail(6, "adversary value " + format_weight(report.adversary_value) + " > 2 x GRQ value " +
                       format_weight(report.grq_value));
  }
  return report;
}

ChargeReport check_charging(const Trace& trace, const Transcript& grq, const OfflineSchedule& adversary) {
  std::vector<Charge> classified;
  try {
    classified = classify_charges(trace, grq, adversary);
  } catch (const ChargingError& e) {
    ChargeReport report = empty_report(trace, grq, adversary);
    report.fail(4, e.what());
    return report;
  }
  try {
    return verify_charge_map(trace, assign_f_charges(grq, std::move(classified)), grq, adversary);
  } catch (const ChargingError& e) {
    ChargeReport report = empty_report(trace, grq, adversary);
    report.fail(3, e.what());
    return report;
  }
}

std::vector<std::string> check_rejection_timing(const Trace& trace, const Transcript& grq,
                                                const OfflineSchedule& adversary) {
  std::vector<std::string> violations;
  const int B = trace.buffer_size();
  for (const auto& [t, id] : adversary_sends(adversary)) {
    const Weight w = trace.packet(id).weight;
    if (auto sent = grq.send_time(id); sent && *sent < t) continue;
    if (!(w > grq_weight_at(grq, t))) continue;
    const std::string who = "packet " + std::to_string(id) + " (adversary t=" + std::to_string(t) + ")";
    auto t0 = grq.rejection_time(id);
    if (!t0) {
      violations.push_back(who + ": never rejected by GRQ");
      continue;
    }
    if (*t0 + B > t) violations.push_back(who + ": rejected at t0=" + std::to_string(*t0) + " with t0 + B > t");
    for (const Packet& p : grq.at(*t0).buffer.packets()) {
      if (p.weight < w) {
        violations.push_back(who + ": slot packet " + std::to_string(p.id) + " at t0 weighs " +
                             format_weight(p.weight) + " < " + format_weight(w));
      }
    }
  }
  return violations;
}

}  // namespace qsched
