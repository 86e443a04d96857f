#pragma once

#include "qsched/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qsched {

using Time = int;
using PacketId = int;

struct Packet {
  PacketId id = 0;
  Time release = 1;
  Time deadline = 1;
  Weight weight{0};

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// Unchecked instance as read from a file or built by hand.
struct RawTrace {
  long long buffer_size = 1;
  std::vector<Packet> packets;
};

struct TraceValidation;

/// A validated problem instance. Construct through validate_trace().
class Trace {
 public:
  Trace() = default;

  int buffer_size() const { return buffer_size_; }
  const std::vector<Packet>& packets() const { return packets_; }
  /// Maximum deadline over all packets, 0 when there are none.
  Time horizon() const { return horizon_; }
  const Packet& packet(PacketId id) const;
  const Packet* find(PacketId id) const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  friend TraceValidation validate_trace(const RawTrace& raw);

  int buffer_size_ = 1;
  std::vector<Packet> packets_;
  Time horizon_ = 0;
};

struct TraceValidation {
  std::optional<Trace> trace;
  std::vector<std::string> errors;

  bool ok() const { return trace.has_value(); }
};

/// Checks every instance invariant and reports all violations at once.
TraceValidation validate_trace(const RawTrace& raw);

/// Validates and throws std::invalid_argument with the joined error list.
Trace make_trace(const RawTrace& raw);

struct LabelRange {
  Time first = 1;
  Time last = 1;

  friend bool operator==(const LabelRange&, const LabelRange&) = default;
};

/// Labels of the buffer positions at time t: [t, t+B-1].
LabelRange slot_window(Time t, int buffer_size);

/// B buffer positions addressed by absolute time label. Position i of
/// slots() carries label base_time()+i; the label base_time() slot is the
/// transmission front.
class SlotBuffer {
 public:
  SlotBuffer() = default;
  SlotBuffer(Time base_time, int size);

  Time base_time() const { return base_time_; }
  int size() const { return static_cast<int>(slots_.size()); }
  LabelRange labels() const { return slot_window(base_time_, size()); }
  bool has_label(Time label) const;

  const std::optional<Packet>& at(Time label) const;
  std::optional<Packet>& at(Time label);

  const std::vector<std::optional<Packet>>& slots() const { return slots_; }
  std::vector<Packet> packets() const;
  int occupied() const;

  friend bool operator==(const SlotBuffer&, const SlotBuffer&) = default;

 private:
  Time base_time_ = 1;
  std::vector<std::optional<Packet>> slots_;
};

enum class BufferPhase { kPostRebuild, kPostTransmit };

/// Empty iff every packet's deadline is at least its label and, after a
/// rebuild, occupancy is a prefix with non-increasing weights.
std::vector<std::string> check_buffer_invariants(const SlotBuffer& buffer, BufferPhase phase);

enum class RejectCause { kAdmissionRefused, kPreempted, kExpired };

const char* to_string(RejectCause cause);

struct Rejection {
  PacketId id = 0;
  RejectCause cause = RejectCause::kAdmissionRefused;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct Step {
  Time time = 1;
  std::vector<PacketId> arrivals;
  SlotBuffer buffer;  // state after the arrival stage
  std::vector<Rejection> rejected;
  std::optional<Packet> sent;  // nullopt = idle

  Weight sent_weight() const { return sent ? sent->weight : Weight(0); }
};

/// Per-step record of one algorithm run over t = 1..horizon.
struct Transcript {
  std::string algorithm;
  int buffer_size = 1;
  std::vector<Step> steps;
  Weight total{0};

  /// steps[t-1]; throws std::out_of_range outside [1, horizon].
  const Step& at(Time t) const;
  Time horizon() const { return static_cast<Time>(steps.size()); }
  std::optional<Time> send_time(PacketId id) const;
  std::optional<Time> rejection_time(PacketId id) const;
};

/// Every packet sent or rejected exactly once, inside its [release, deadline]
/// window, and at most one transmission per step.
std::vector<std::string> check_transcript_partition(const Trace& trace, const Transcript& transcript);

}  // namespace qsched
