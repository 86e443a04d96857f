#pragma once

#include "qsched/model.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsched {

/// Order among equal-weight packets. Heavier packets always come first; the
/// tie-break then compares deadline, then id (smaller id first).
enum class TieBreak {
  kEarliestDeadline,  // default
  kLatestDeadline,
};

struct SchedulerConfig {
  TieBreak tie_break = TieBreak::kEarliestDeadline;
};

/// Strict total order: true iff a is considered before b.
bool precedes(const Packet& a, const Packet& b, const SchedulerConfig& config = {});

/// A scheduler was handed input that breaks its preconditions.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RebuildResult {
  SlotBuffer buffer;
  std::vector<Rejection> rejected;
};

/// GreedyQueue arrival stage. Buffered and arriving packets are taken in
/// descending weight order; each goes to the smallest-labeled empty slot
/// whose label does not exceed its deadline, or is rejected. Because slots
/// fill front to back, that slot is always the first empty one.
RebuildResult grq_rebuild(std::span<const Packet> buffered, std::span<const Packet> arrivals, Time t, int buffer_size,
                          const SchedulerConfig& config = {});

struct TransmitResult {
  std::optional<Packet> sent;
  std::vector<Packet> remaining;
};

/// Sends the label-t packet if present. Throws PreconditionError if it is not
/// the heaviest packet in the buffer.
TransmitResult grq_transmit(const SlotBuffer& buffer, Time t);

Transcript run_grq(const Trace& trace, const SchedulerConfig& config = {});

/// Keeps the heaviest B packets and sends the heaviest one each step. On
/// overflow, among the lightest packets the one with the latest deadline
/// (then largest id) is dropped first. Unsent packets expire at the end of
/// their deadline step. Buffer snapshots list held packets heaviest first;
/// labels carry no deadline meaning for this algorithm.
Transcript run_naive_greedy(const Trace& trace, const SchedulerConfig& config = {});

/// Structural checks for a GreedyQueue transcript: post-rebuild buffer
/// invariants, front-of-queue transmission of the heaviest packet, and the
/// sent-or-rejected partition.
std::vector<std::string> check_grq_transcript(const Trace& trace, const Transcript& transcript);

/// The weight held at every label never decreases between consecutive
/// post-rebuild snapshots while the label exists. Empty counts as -infinity.
std::vector<std::string> check_slot_monotonicity(const Transcript& transcript);

}  // namespace qsched
