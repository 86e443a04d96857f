#include "qsched/charging.hpp"

#include "qsched/generators.hpp"
#include "qsched/schedulers.hpp"

#include <gtest/gtest.h>

#include "brute_force.hpp"

namespace qsched {
namespace {

using testing::trace_of;

const Charge& charge_for(const ChargeMap& map, PacketId id) {
  for (const Charge& c : map.charges) {
    if (c.packet == id) return c;
  }
  throw std::runtime_error("no charge");
}

TEST(ClassifyCharges, SelfCharge) {
  const Trace t = trace_of(1, {{0, 1, 2, Weight(1)}});
  const auto grq = run_grq(t);
  auto charges = classify_charges(t, grq, {{{0, 2}}, Weight(1)});
  ASSERT_EQ(charges.size(), 1u);
  EXPECT_EQ(charges[0].kind, ChargeKind::kSelf);
  EXPECT_EQ(charges[0].target, 1);
}

TEST(ClassifyCharges, DownwardCharge) {
  const Trace t = trace_of(2, {{0, 3, 3, Weight(5)}, {1, 3, 3, Weight(4)}});
  const auto grq = run_grq(t);
  ASSERT_EQ(grq.at(3).sent->id, 0);
  auto charges = classify_charges(t, grq, {{{1, 3}}, Weight(4)});
  ASSERT_EQ(charges.size(), 1u);
  EXPECT_EQ(charges[0].kind, ChargeKind::kDownward);
  EXPECT_EQ(charges[0].target, 3);
}

TEST(ClassifyCharges, TieIsDownward) {
  const Trace t = trace_of(2, {{0, 1, 1, Weight(2)}, {1, 1, 1, Weight(2)}});
  const auto grq = run_grq(t);
  auto charges = classify_charges(t, grq, {{{1, 1}}, Weight(2)});
  EXPECT_EQ(charges[0].kind, ChargeKind::kDownward);
}

TEST(ClassifyCharges, ForwardChargeAfterRejection) {
  const Trace t = trace_of(1, {{1, 1, 1, Weight(1)}, {2, 1, 2, Weight(1)}});
  const auto grq = run_grq(t);
  const OfflineSchedule adv{{{2, 2}}, Weight(1)};
  auto charges = classify_charges(t, grq, adv);
  ASSERT_EQ(charges.size(), 1u);
  EXPECT_EQ(charges[0].kind, ChargeKind::kForward);
  EXPECT_EQ(charges[0].rejection_time, 1);
  EXPECT_FALSE(charges[0].target);

  auto map = assign_f_charges(grq, charges);
  EXPECT_EQ(charge_for(map, 2).target, 1);
  EXPECT_EQ(map.per_target.at(1), 1);

  auto report = verify_charge_map(t, map, grq, adv);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.adversary_value, Weight(1));
  EXPECT_EQ(report.grq_value, Weight(1));
  EXPECT_EQ(report.f_charges, 1u);
}

TEST(ClassifyCharges, MissingRejectionThrows) {
  const Trace t = trace_of(1, {{1, 1, 1, Weight(1)}, {2, 1, 2, Weight(1)}});
  auto grq = run_grq(t);
  grq.steps[0].rejected.clear();
  const OfflineSchedule adv{{{2, 2}}, Weight(1)};
  EXPECT_THROW(classify_charges(t, grq, adv), ChargingError);
  auto report = check_charging(t, grq, adv);
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.checks[4].passed);
}

// B=3, all released at t=1. Three heavy packets fill GRQ's queue and push
// out x1, x2; the adversary sends h1 at 1 (D-charge on step 1) and holds
// x1, x2 until 4 and 5, where GRQ idles.
Trace two_forward_instance() {
  return trace_of(3, {{0, 1, 1, Weight(10)},
                      {1, 1, 2, Weight(10)},
                      {2, 1, 3, Weight(10)},
                      {3, 1, 5, Weight(5)},
                      {4, 1, 5, Weight(5)}});
}

TEST(AssignForwardCharges, SecondChargeMovesToNextStep) {
  const Trace t = two_forward_instance();
  const auto grq = run_grq(t);
  ASSERT_EQ(grq.rejection_time(3), 1);
  ASSERT_EQ(grq.rejection_time(4), 1);
  const OfflineSchedule adv{{{0, 1}, {3, 4}, {4, 5}}, Weight(20)};
  ASSERT_TRUE(verify_schedule(t, adv).empty());

  auto map = assign_f_charges(grq, classify_charges(t, grq, adv));
  EXPECT_EQ(charge_for(map, 0).kind, ChargeKind::kDownward);
  EXPECT_EQ(charge_for(map, 3).target, 1);
  EXPECT_EQ(charge_for(map, 4).target, 2);
  EXPECT_EQ(map.per_target.at(1), 2);
  EXPECT_EQ(map.per_target.at(2), 1);
  EXPECT_TRUE(verify_charge_map(t, map, grq, adv).ok());
}

TEST(AssignForwardCharges, NoForwardChargesLeavesFixedOnes) {
  const Trace t = gen_killer(3, Weight(1, 4));
  const auto grq = run_grq(t);
  const auto adv = optimal_bounded(t);
  auto classified = classify_charges(t, grq, adv);
  auto map = assign_f_charges(grq, classified);
  EXPECT_EQ(map.charges, classified);
  auto report = verify_charge_map(t, map, grq, adv);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.f_charges, 0u);
  EXPECT_EQ(report.adversary_value, Weight(5, 2));
}

TEST(AssignForwardCharges, NoRoomThrows) {
  const Trace t = two_forward_instance();
  const auto grq = run_grq(t);
  const OfflineSchedule adv{{{0, 1}, {3, 4}, {4, 5}}, Weight(20)};
  auto classified = classify_charges(t, grq, adv);
  // Pre-fill the whole window so the forward charges cannot land.
  for (Time s : {1, 2, 3}) {
    for (int k = 0; k < 2; ++k) {
      Charge c;
      c.kind = ChargeKind::kDownward;
      c.source_time = s;
      c.packet = 100 + s * 2 + k;
      c.target = s;
      classified.push_back(c);
    }
  }
  EXPECT_THROW(assign_f_charges(grq, classified), ChargingError);
}

TEST(VerifyChargeMap, ThirdChargeOnATargetFails) {
  const Trace t = trace_of(1, {{1, 1, 1, Weight(1)}, {2, 1, 2, Weight(1)}});
  const auto grq = run_grq(t);
  const OfflineSchedule adv{{{2, 2}}, Weight(1)};
  auto map = assign_f_charges(grq, classify_charges(t, grq, adv));
  ASSERT_TRUE(verify_charge_map(t, map, grq, adv).ok());
  Charge extra = map.charges[0];
  extra.kind = ChargeKind::kDownward;
  map.charges.push_back(extra);
  map.charges.push_back(extra);
  auto report = verify_charge_map(t, map, grq, adv);
  EXPECT_FALSE(report.checks[1].passed);
  EXPECT_FALSE(report.checks[0].passed);
}

TEST(VerifyChargeMap, HeavierSourceFailsDomination) {
  const Trace t = trace_of(2, {{0, 1, 1, Weight(5)}, {1, 1, 1, Weight(4)}});
  const auto grq = run_grq(t);
  const OfflineSchedule adv{{{1, 1}}, Weight(4)};
  auto map = assign_f_charges(grq, classify_charges(t, grq, adv));
  map.charges[0].weight = Weight(6);
  auto report = verify_charge_map(t, map, grq, adv);
  EXPECT_FALSE(report.checks[2].passed);
  EXPECT_FALSE(report.checks[6].passed);
}

TEST(VerifyChargeMap, ForwardWindowChecked) {
  const Trace t = two_forward_instance();
  const auto grq = run_grq(t);
  const OfflineSchedule adv{{{0, 1}, {3, 4}, {4, 5}}, Weight(20)};
  auto map = assign_f_charges(grq, classify_charges(t, grq, adv));
  for (Charge& c : map.charges) {
    if (c.packet == 4) c.rejection_time = 3;
  }
  auto report = verify_charge_map(t, map, grq, adv);
  EXPECT_FALSE(report.checks[3].passed);
  EXPECT_FALSE(report.checks[4].passed);
}

TEST(CheckCharging, AllFeasibleSchedulesOnSmallInstances) {
  RandomFamily f;
  f.n_max = 5;
  f.b_max = 3;
  f.horizon_max = 5;
  f.weight_max = 6;
  for (std::uint64_t i = 0; i < 150; ++i) {
    const Trace t = f.generate(i);
    const auto grq = run_grq(t);
    for (const auto& adv : enumerate_feasible(t, 200)) {
      auto report = check_charging(t, grq, adv);
      ASSERT_TRUE(report.ok()) << "trace " << i;
      EXPECT_TRUE(check_rejection_timing(t, grq, adv).empty());
    }
  }
}

TEST(RejectionTiming, ReportsMissingRejection) {
  const Trace t = trace_of(1, {{1, 1, 1, Weight(1)}, {2, 1, 2, Weight(1)}});
  auto grq = run_grq(t);
  const OfflineSchedule adv{{{2, 2}}, Weight(1)};
  EXPECT_TRUE(check_rejection_timing(t, grq, adv).empty());
  grq.steps[0].rejected.clear();
  EXPECT_EQ(check_rejection_timing(t, grq, adv).size(), 1u);
}

}  // namespace
}  // namespace qsched
