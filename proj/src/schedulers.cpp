#include "qsched/schedulers.hpp"

#include <algorithm>
#include <set>

namespace qsched {

bool precedes(const Packet& a, const Packet& b, const SchedulerConfig& config) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.deadline != b.deadline) {
    return config.tie_break == TieBreak::kEarliestDeadline ? a.deadline < b.deadline : a.deadline > b.deadline;
  }
  return a.id < b.id;
}

RebuildResult grq_rebuild(std::span<const Packet> buffered, std::span<const Packet> arrivals, Time t, int buffer_size,
                          const SchedulerConfig& config) {
  if (t < 1 || buffer_size < 1) throw PreconditionError("grq_rebuild: t and B must be >= 1");
  if (static_cast<int>(buffered.size()) > buffer_size) {
    throw PreconditionError("grq_rebuild: " + std::to_string(buffered.size()) + " buffered packets exceed B");
  }

  struct Candidate {
    Packet packet;
    bool was_buffered;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(buffered.size() + arrivals.size());
  for (const Packet& p : buffered) candidates.push_back({p, true});
  for (const Packet& p : arrivals) candidates.push_back({p, false});
  for (const auto& c : candidates) {
    if (c.packet.deadline < t || c.packet.release > t) {
      throw PreconditionError("grq_rebuild: packet " + std::to_string(c.packet.id) + " not live at t=" +
                              std::to_string(t));
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& a, const Candidate& b) { return precedes(a.packet, b.packet, config); });

  RebuildResult result{SlotBuffer(t, buffer_size), {}};
  int placed = 0;
  for (const auto& c : candidates) {
    const Time label = t + placed;
    if (placed < buffer_size && label <= c.packet.deadline) {
      result.buffer.at(label) = c.packet;
      ++placed;
    } else {
      result.rejected.push_back(
          {c.packet.id, c.was_buffered ? RejectCause::kPreempted : RejectCause::kAdmissionRefused});
    }
  }
  return result;
}

TransmitResult grq_transmit(const SlotBuffer& buffer, Time t) {
  if (buffer.base_time() != t) throw PreconditionError("grq_transmit: buffer base time differs from t");
  TransmitResult result;
  result.remaining = buffer.packets();
  const auto& front = buffer.at(t);
  if (!front) {
    if (!result.remaining.empty()) throw PreconditionError("grq_transmit: front slot empty in a non-empty buffer");
    return result;
  }
  for (const Packet& p : result.remaining) {
    if (p.weight > front->weight) {
      throw PreconditionError("grq_transmit: front packet " + std::to_string(front->id) + " is not the heaviest");
    }
  }
  result.sent = front;
  std::erase_if(result.remaining, [&](const Packet& p) { return p.id == front->id; });
  return result;
}

namespace {

std::vector<std::vector<Packet>> arrivals_by_time(const Trace& trace) {
  std::vector<std::vector<Packet>> by_time(static_cast<std::size_t>(trace.horizon()) + 1);
  for (const Packet& p : trace.packets()) by_time[static_cast<std::size_t>(p.release)].push_back(p);
  return by_time;
}

std::vector<PacketId> ids_of(const std::vector<Packet>& packets) {
  std::vector<PacketId> ids;
  for (const Packet& p : packets) ids.push_back(p.id);
  return ids;
}

}  // namespace

Transcript run_grq(const Trace& trace, const SchedulerConfig& config) {
  Transcript transcript;
  transcript.algorithm = "grq";
  transcript.buffer_size = trace.buffer_size();
  const auto arrivals = arrivals_by_time(trace);

  std::vector<Packet> carried;
  for (Time t = 1; t <= trace.horizon(); ++t) {
    const auto& arriving = arrivals[static_cast<std::size_t>(t)];
    RebuildResult rebuilt = grq_rebuild(carried, arriving, t, trace.buffer_size(), config);
    TransmitResult sent = grq_transmit(rebuilt.buffer, t);

    Step step;
    step.time = t;
    step.arrivals = ids_of(arriving);
    step.buffer = std::move(rebuilt.buffer);
    step.rejected = std::move(rebuilt.rejected);
    step.sent = sent.sent;
    if (sent.sent) transcript.total += sent.sent->weight;
    transcript.steps.push_back(std::move(step));
    carried = std::move(sent.remaining);
  }
  return transcript;
}

Transcript run_naive_greedy(const Trace& trace, const SchedulerConfig& config) {
  Transcript transcript;
  transcript.algorithm = "greedy";
  transcript.buffer_size = trace.buffer_size();
  const auto arrivals = arrivals_by_time(trace);
  const auto B = static_cast<std::size_t>(trace.buffer_size());

  std::vector<Packet> held;
  std::set<PacketId> arrived_now;
  for (Time t = 1; t <= trace.horizon(); ++t) {
    Step step;
    step.time = t;
    const auto& arriving = arrivals[static_cast<std::size_t>(t)];
    step.arrivals = ids_of(arriving);
    arrived_now = {step.arrivals.begin(), step.arrivals.end()};
    held.insert(held.end(), arriving.begin(), arriving.end());

    std::sort(held.begin(), held.end(), [&](const Packet& a, const Packet& b) { return precedes(a, b, config); });
    // Overflow victims: lightest first, latest deadline first among equals.
    auto drop_first = [](const Packet& a, const Packet& b) {
      if (a.weight != b.weight) return a.weight < b.weight;
      if (a.deadline != b.deadline) return a.deadline > b.deadline;
      return a.id > b.id;
    };
    while (held.size() > B) {
      auto victim = std::min_element(held.begin(), held.end(), drop_first);
      step.rejected.push_back(
          {victim->id, arrived_now.count(victim->id) ? RejectCause::kAdmissionRefused : RejectCause::kPreempted});
      held.erase(victim);
    }

    step.buffer = SlotBuffer(t, trace.buffer_size());
    for (std::size_t i = 0; i < held.size(); ++i) step.buffer.at(t + static_cast<Time>(i)) = held[i];

    if (!held.empty()) {
      step.sent = held.front();
      transcript.total += held.front().weight;
      held.erase(held.begin());
    }
    for (auto it = held.begin(); it != held.end();) {
      if (it->deadline <= t) {
        step.rejected.push_back({it->id, RejectCause::kExpired});
        it = held.erase(it);
      } else {
        ++it;
      }
    }
    transcript.steps.push_back(std::move(step));
  }
  return transcript;
}

std::vector<std::string> check_grq_transcript(const Trace& trace, const Transcript& transcript) {
  std::vector<std::string> violations = check_transcript_partition(trace, transcript);
  for (const Step& s : transcript.steps) {
    const std::string at = "t=" + std::to_string(s.time) + ": ";
    if (s.buffer.base_time() != s.time || s.buffer.size() != trace.buffer_size()) {
      violations.push_back(at + "buffer window does not match [t, t+B-1]");
      continue;
    }
    for (auto& v : check_buffer_invariants(s.buffer, BufferPhase::kPostRebuild)) violations.push_back(at + v);

    const auto& front = s.buffer.at(s.time);
    if (front.has_value() != s.sent.has_value() || (front && front->id != s.sent->id)) {
      violations.push_back(at + "transmission is not the front slot");
    }
    if (s.sent) {
      for (const Packet& p : s.buffer.packets()) {
        if (p.weight > s.sent->weight) {
          violations.push_back(at + "sent packet " + std::to_string(s.sent->id) + " lighter than buffered packet " +
                               std::to_string(p.id));
        }
      }
    }
  }
  return violations;
}

std::vector<std::string> check_slot_monotonicity(const Transcript& transcript) {
  std::vector<std::string> violations;
  for (std::size_t i = 1; i < transcript.steps.size(); ++i) {
    const SlotBuffer& before = transcript.steps[i - 1].buffer;
    const SlotBuffer& after = transcript.steps[i].buffer;
    for (Time label = after.base_time(); label <= before.labels().last; ++label) {
      if (!before.has_label(label) || !after.has_label(label)) continue;
      const auto& old_slot = before.at(label);
      const auto& new_slot = after.at(label);
      if (!old_slot) continue;
      if (!new_slot || new_slot->weight < old_slot->weight) {
        violations.push_back("label " + std::to_string(label) + " dropped from " + format_weight(old_slot->weight) +
                             " at t=" + std::to_string(before.base_time()) + " to " +
                             (new_slot ? format_weight(new_slot->weight) : std::string("empty")) + " at t=" +
                             std::to_string(after.base_time()));
      }
    }
  }
  return violations;
}

}  // namespace qsched
