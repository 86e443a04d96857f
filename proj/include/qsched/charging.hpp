#pragma once

#include "qsched/model.hpp"
#include "qsched/oracle.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsched {

// Charging maps every packet an adversary (offline) schedule sends onto a
// GreedyQueue transmission of at least the same weight, with no GRQ step
// absorbing more than two charges. Building and checking the map on a
// concrete (trace, adversary) pair is a machine check of 2-competitiveness
// for that pair.
//
//   S (self):     GRQ already sent the same packet at an earlier step.
//   D (downward): GRQ sends something at least as heavy at the same step.
//   F (forward):  otherwise. GRQ rejected the packet at some t0 with
//                 t0 + B <= adversary time; the charge goes to the earliest
//                 GRQ step >= t0 that still has fewer than two charges.

enum class ChargeKind { kSelf, kDownward, kForward };

const char* to_string(ChargeKind kind);

struct Charge {
  ChargeKind kind = ChargeKind::kSelf;
  Time source_time = 0;  // adversary send time
  PacketId packet = 0;
  Weight weight{0};
  std::optional<Time> target;          // GRQ step; unset for unplaced F
  std::optional<Time> rejection_time;  // F only

  friend bool operator==(const Charge&, const Charge&) = default;
};

struct ChargeMap {
  std::vector<Charge> charges;
  std::map<Time, int> per_target;
};

/// Classification or placement could not be completed. Either means a
/// structural claim of the analysis failed on this instance.
class ChargingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One charge per adversary transmission, in adversary time order. S and D
/// charges carry their target; F charges carry rejection_time only.
/// Throws ChargingError when an F packet was never rejected by GRQ.
std::vector<Charge> classify_charges(const Trace& trace, const Transcript& grq, const OfflineSchedule& adversary);

/// Installs all S/D charges, then places F charges grouped by rejection time
/// (ascending) and, within a group, by adversary time. Placements are final.
/// Throws ChargingError when no GRQ step in [t0, t0+B-1] has room.
ChargeMap assign_f_charges(const Transcript& grq, std::vector<Charge> classified);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
};

struct ChargeReport {
  static constexpr std::size_t kChecks = 7;

  std::array<CheckResult, kChecks> checks;
  Weight adversary_value{0};
  Weight grq_value{0};
  std::size_t s_charges = 0;
  std::size_t d_charges = 0;
  std::size_t f_charges = 0;

  bool ok() const;
  void fail(std::size_t check, std::string message);
};

/// The seven checks, in order: coverage, at most two per target, weight
/// domination, F window, rejection-time buffer weights, the two counting
/// inequalities at every t0 with F activity, and the 2x value bound.
ChargeReport verify_charge_map(const Trace& trace, const ChargeMap& map, const Transcript& grq,
                               const OfflineSchedule& adversary);

/// classify + assign + verify. Construction failures are recorded in the
/// report (check 4 for placement, check 5 for missing rejections) instead
/// of thrown.
ChargeReport check_charging(const Trace& trace, const Transcript& grq, const OfflineSchedule& adversary);

/// Whenever the adversary sends x at t, GRQ sends something lighter at t and
/// has not sent x earlier: x was rejected at some t0 with t0 + B <= t and
/// every occupied slot at t0 weighs at least w(x).
std::vector<std::string> check_rejection_timing(const Trace& trace, const Transcript& grq,
                                                const OfflineSchedule& adversary);

}  // namespace qsched
