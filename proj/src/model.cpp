#include "qsched/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qsched {

const Packet& Trace::packet(PacketId id) const {
  if (const Packet* p = find(id)) return *p;
  throw std::out_of_range("unknown packet id " + std::to_string(id));
}

const Packet* Trace::find(PacketId id) const {
  auto it = std::find_if(packets_.begin(), packets_.end(), [id](const Packet& p) { return p.id == id; });
  return it == packets_.end() ? nullptr : &*it;
}

TraceValidation validate_trace(const RawTrace& raw) {
  TraceValidation result;
  if (raw.buffer_size < 1) {
    result.errors.push_back("buffer size B=" + std::to_string(raw.buffer_size) + " < 1");
  }
  std::map<PacketId, int> seen;
  for (const Packet& p : raw.packets) {
    const std::string who = "packet " + std::to_string(p.id);
    if (p.id < 0) result.errors.push_back(who + ": negative id");
    if (++seen[p.id] == 2) result.errors.push_back(who + ": duplicate id");
    if (p.release < 1) result.errors.push_back(who + ": release " + std::to_string(p.release) + " < 1");
    if (p.deadline < p.release) {
      result.errors.push_back(who + ": deadline " + std::to_string(p.deadline) + " < release " +
                              std::to_string(p.release));
    }
    if (p.weight < 0) result.errors.push_back(who + ": negative weight " + format_weight(p.weight));
  }
  if (raw.buffer_size > (1 << 24)) result.errors.push_back("buffer size too large");
  if (!result.errors.empty()) return result;

  Trace trace;
  trace.buffer_size_ = static_cast<int>(raw.buffer_size);
  trace.packets_ = raw.packets;
  for (const Packet& p : trace.packets_) trace.horizon_ = std::max(trace.horizon_, p.deadline);
  result.trace = std::move(trace);
  return result;
}

Trace make_trace(const RawTrace& raw) {
  auto validation = validate_trace(raw);
  if (!validation.ok()) {
    std::ostringstream os;
    os << "invalid trace:";
    for (const auto& e : validation.errors) os << "\n  " << e;
    throw std::invalid_argument(os.str());
  }
  return std::move(*validation.trace);
}

LabelRange slot_window(Time t, int buffer_size) {
  return {t, t + buffer_size - 1};
}

SlotBuffer::SlotBuffer(Time base_time, int size) : base_time_(base_time), slots_(static_cast<std::size_t>(size)) {
  if (base_time < 1 || size < 1) throw std::invalid_argument("SlotBuffer needs t >= 1 and B >= 1");
}

bool SlotBuffer::has_label(Time label) const {
  return label >= base_time_ && label < base_time_ + size();
}

const std::optional<Packet>& SlotBuffer::at(Time label) const {
  if (!has_label(label)) throw std::out_of_range("label " + std::to_string(label) + " not in buffer window");
  return slots_[static_cast<std::size_t>(label - base_time_)];
}

std::optional<Packet>& SlotBuffer::at(Time label) {
  if (!has_label(label)) throw std::out_of_range("label " + std::to_string(label) + " not in buffer window");
  return slots_[static_cast<std::size_t>(label - base_time_)];
}

std::vector<Packet> SlotBuffer::packets() const {
  std::vector<Packet> out;
  for (const auto& s : slots_) {
    if (s) out.push_back(*s);
  }
  return out;
}

int SlotBuffer::occupied() const {
  return static_cast<int>(std::count_if(slots_.begin(), slots_.end(), [](const auto& s) { return s.has_value(); }));
}

std::vector<std::string> check_buffer_invariants(const SlotBuffer& buffer, BufferPhase phase) {
  std::vector<std::string> violations;
  const Time base = buffer.base_time();
  for (int i = 0; i < buffer.size(); ++i) {
    const auto& slot = buffer.slots()[static_cast<std::size_t>(i)];
    if (slot && slot->deadline < base + i) {
      violations.push_back("packet " + std::to_string(slot->id) + " with deadline " + std::to_string(slot->deadline) +
                           " < label " + std::to_string(base + i));
    }
  }
  if (phase != BufferPhase::kPostRebuild) return violations;

  bool seen_empty = false;
  const Packet* previous = nullptr;
  for (int i = 0; i < buffer.size(); ++i) {
    const auto& slot = buffer.slots()[static_cast<std::size_t>(i)];
    if (!slot) {
      seen_empty = true;
      continue;
    }
    if (seen_empty) {
      violations.push_back("occupied label " + std::to_string(base + i) + " after an empty slot");
    }
    if (previous && previous->weight < slot->weight) {
      violations.push_back("weights increase at label " + std::to_string(base + i) + ": " +
                           format_weight(previous->weight) + " then " + format_weight(slot->weight));
    }
    previous = &*slot;
  }
  return violations;
}

const char* to_string(RejectCause cause) {
  switch (cause) {
    case RejectCause::kAdmissionRefused: return "refused";
    case RejectCause::kPreempted: return "preempted";
    case RejectCause::kExpired: return "expired";
  }
  return "?";
}

const Step& Transcript::at(Time t) const {
  if (t < 1 || t > horizon()) throw std::out_of_range("time " + std::to_string(t) + " outside transcript");
  return steps[static_cast<std::size_t>(t - 1)];
}

std::optional<Time> Transcript::send_time(PacketId id) const {
  for (const Step& s : steps) {
    if (s.sent && s.sent->id == id) return s.time;
  }
  return std::nullopt;
}

std::optional<Time> Transcript::rejection_time(PacketId id) const {
  for (const Step& s : steps) {
    for (const Rejection& r : s.rejected) {
      if (r.id == id) return s.time;
    }
  }
  return std::nullopt;
}

std::vector<std::string> check_transcript_partition(const Trace& trace, const Transcript& transcript) {
  std::vector<std::string> violations;
  if (transcript.horizon() != trace.horizon()) {
    violations.push_back("transcript covers " + std::to_string(transcript.horizon()) + " steps, horizon is " +
                         std::to_string(trace.horizon()));
  }
  std::map<PacketId, int> outcomes;
  Weight total{0};
  for (const Step& s : transcript.steps) {
    auto within = [&](PacketId id, const char* what) {
      const Packet* p = trace.find(id);
      if (!p) {
        violations.push_back(std::string(what) + " unknown packet " + std::to_string(id));
        return;
      }
      if (s.time < p->release || s.time > p->deadline) {
        violations.push_back("packet " + std::to_string(id) + " " + what + " at " + std::to_string(s.time) +
                             " outside [" + std::to_string(p->release) + ", " + std::to_string(p->deadline) + "]");
      }
      ++outcomes[id];
    };
    if (s.sent) {
      within(s.sent->id, "sent");
      total += s.sent->weight;
    }
    for (const Rejection& r : s.rejected) within(r.id, "rejected");
  }
  for (const Packet& p : trace.packets()) {
    int n = outcomes.count(p.id) ? outcomes[p.id] : 0;
    if (n != 1) {
      violations.push_back("packet " + std::to_string(p.id) + " has " + std::to_string(n) +
                           " send/reject outcomes, expected 1");
    }
  }
  if (total != transcript.total) {
    violations.push_back("recorded total " + format_weight(transcript.total) + " != sum of sends " +
                         format_weight(total));
  }
  return violations;
}

}  // namespace qsched
