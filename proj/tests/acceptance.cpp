// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. All comparisons are exact rationals.

#include "qsched/charging.hpp"
#include "qsched/generators.hpp"
#include "qsched/oracle.hpp"
#include "qsched/qtrace.hpp"
#include "qsched/schedulers.hpp"
#include "qsched/workbench.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qsched;

constexpr std::size_t kRatioTraces = 10'000;
constexpr std::size_t kChargingTraces = 1'000;
constexpr std::size_t kEnumeratedPerTrace = 50;
constexpr int kEnumeratedMaxN = 6;
constexpr std::size_t kOracleEqualityTraces = 1'000;
constexpr std::size_t kSearchIterations = 10'000;

struct Criterion {
  std::string id;
  std::string title;
  std::size_t checked = 0;
  std::vector<std::string> failures;
  std::string detail;

  void fail(const std::string& what) {
    if (failures.size() < 20) failures.push_back(what);
    else if (failures.size() == 20) failures.push_back("...");
  }
  bool passed() const { return failures.empty(); }
};

// n <= 10, B in 1..4, horizon <= 8, integer weights 1..16.
RandomFamily ratio_family() {
  RandomFamily f;
  f.n_min = 0;
  f.n_max = 10;
  f.b_min = 1;
  f.b_max = 4;
  f.horizon_min = 1;
  f.horizon_max = 8;
  f.weight_min = 1;
  f.weight_max = 16;
  f.seed = 20240601;
  return f;
}

std::string where(std::size_t index, const Trace& t) {
  return "trace #" + std::to_string(index) + " [" + trace_digest(t) + "]";
}

void add_all(Criterion& c, const std::string& prefix, const std::vector<std::string>& violations) {
  for (const auto& v : violations) c.fail(prefix + ": " + v);
}

void add_report(Criterion& c, const std::string& prefix, const ChargeReport& report) {
  for (const auto& check : report.checks) {
    for (const auto& f : check.failures) c.fail(prefix + ": " + check.name + ": " + f);
  }
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();

  Criterion c1{"C1", "Bounded OPT <= 2 x GRQ on 10,000 random traces"};
  Criterion c2{"C2", "Charging verifier: all seven checks, OPT and enumerated adversaries"};
  Criterion c3{"C3", "Slot weights never decrease"};
  Criterion c4{"C4", "Forward charges: rejection at t0 with t0+B <= t and heavy buffer"};
  Criterion c5{"C5", "Naive greedy collapses on killer(B, 1/10), GRQ is optimal there"};
  Criterion c6{"C6", "Oracle cross-checks"};
  Criterion c7{"C7", "Structural GRQ invariants on every step"};
  Criterion c8{"C8", "Adversarial search ratio <= 2"};

  const RandomFamily family = ratio_family();
  Weight max_ratio{0};
  std::size_t enumerated_traces = 0, enumerated_schedules = 0;

  for (std::size_t i = 0; i < kRatioTraces; ++i) {
    const Trace trace = family.generate(i);
    const std::string at = where(i, trace);
    const Transcript grq = run_grq(trace);
    OfflineSchedule opt;
    try {
      opt = optimal_bounded(trace);
    } catch (const BudgetExceeded& e) {
      c1.fail(at + ": " + e.what());
      continue;
    }

    // C1
    ++c1.checked;
    if (opt.value > 2 * grq.total) c1.fail(at + ": OPT " + format_weight(opt.value) + " > 2 x " + format_weight(grq.total));
    if (auto r = competitive_ratio(opt.value, grq.total); r && *r > max_ratio) max_ratio = *r;

    // C3, C7
    ++c3.checked;
    add_all(c3, at, check_slot_monotonicity(grq));
    ++c7.checked;
    add_all(c7, at, check_grq_transcript(trace, grq));

    // C4 against the optimum for every trace
    ++c4.checked;
    add_all(c4, at + " vs OPT", check_rejection_timing(trace, grq, opt));

    // C2
    if (i < kChargingTraces) {
      ++c2.checked;
      add_report(c2, at + " vs OPT", check_charging(trace, grq, opt));
    }
    if (static_cast<int>(trace.packets().size()) <= kEnumeratedMaxN) {
      ++enumerated_traces;
      for (const OfflineSchedule& adv : enumerate_feasible(trace, kEnumeratedPerTrace)) {
        ++enumerated_schedules;
        ++c2.checked;
        add_all(c2, at + " schedule infeasible", verify_schedule(trace, adv));
        add_report(c2, at + " vs enumerated", check_charging(trace, grq, adv));
        ++c4.checked;
        add_all(c4, at + " vs enumerated", check_rejection_timing(trace, grq, adv));
      }
    }

    // C6: ordering, monotonicity at B and B+1, oracle outputs feasible
    ++c6.checked;
    const OfflineSchedule unbounded = optimal_unbounded(trace);
    if (opt.value > unbounded.value) c6.fail(at + ": bounded > unbounded");
    add_all(c6, at + " bounded output", verify_schedule(trace, opt));
    const Trace roomy = make_trace({static_cast<long long>(trace.packets().size()) + 1, trace.packets()});
    add_all(c6, at + " unbounded output", verify_schedule(roomy, unbounded));
    const Trace bigger = make_trace({trace.buffer_size() + 1, trace.packets()});
    const OfflineSchedule opt_bigger = optimal_bounded(bigger);
    if (opt_bigger.value < opt.value) c6.fail(at + ": bounded OPT decreases from B to B+1");
    add_all(c6, at + " bounded output at B+1", verify_schedule(bigger, opt_bigger));
  }
  c1.detail = "max OPT/GRQ = " + format_weight(max_ratio);
  c2.detail = std::to_string(std::min(kChargingTraces, kRatioTraces)) + " traces vs OPT; " +
              std::to_string(enumerated_schedules) + " enumerated schedules over " + std::to_string(enumerated_traces) +
              " traces with n <= 6";

  // C6: B >= n makes the capacity irrelevant
  for (std::size_t i = 0; i < kOracleEqualityTraces; ++i) {
    const Trace base = family.generate(kRatioTraces + i);
    const int b = std::max<int>(1, static_cast<int>(base.packets().size())) + static_cast<int>(i % 3);
    const Trace trace = make_trace({b, base.packets()});
    ++c6.checked;
    const Weight bounded = optimal_bounded(trace).value;
    const Weight unbounded = optimal_unbounded(trace).value;
    if (bounded != unbounded) {
      c6.fail(where(i, trace) + ": B >= n but bounded " + format_weight(bounded) + " != unbounded " +
              format_weight(unbounded));
    }
  }

  // C5
  struct KillerCase {
    int b;
    Weight ratio;
  };
  const Weight eps(1, 10);
  std::ostringstream killer_detail;
  for (const KillerCase& k : {KillerCase{5, Weight(23, 5)}, KillerCase{10, Weight(91, 10)},
                              KillerCase{20, Weight(181, 10)}}) {
    const Trace trace = gen_killer(k.b, eps);
    const Weight expected_opt = Weight(1) + Weight(k.b - 1) * (Weight(1) - eps);
    const Weight greedy = run_naive_greedy(trace).total;
    const Weight opt = optimal_bounded(trace).value;
    const Weight grq = run_grq(trace).total;
    ++c5.checked;
    const std::string at = "killer(B=" + std::to_string(k.b) + ")";
    if (greedy != 1) c5.fail(at + ": greedy " + format_weight(greedy) + " != 1");
    if (opt != expected_opt) c5.fail(at + ": OPT " + format_weight(opt) + " != " + format_weight(expected_opt));
    if (competitive_ratio(opt, greedy) != k.ratio) c5.fail(at + ": greedy ratio != " + format_weight(k.ratio));
    if (grq != opt) c5.fail(at + ": GRQ " + format_weight(grq) + " != OPT");
    killer_detail << at << " greedy ratio " << format_weight(opt / greedy) << "; ";
  }
  c5.detail = killer_detail.str();

  // C8
  {
    GeneratorParams params;
    params.n = 8;
    params.buffer_size = 3;
    params.horizon = 6;
    params.weight_min = 1;
    params.weight_max = 16;
    params.seed = 7;
    const SearchResult result = adversarial_search(params, kSearchIterations);
    c8.checked = result.evaluated;
    if (result.worst_ratio > 2) c8.fail("max ratio " + format_weight(result.worst_ratio) + " > 2");
    for (const Trace& t : result.exceeding) c8.fail("exceeding trace:\n" + emit_trace(t));
    if (result.skipped > 0) c8.fail(std::to_string(result.skipped) + " candidates skipped on oracle budget");
    c8.detail = "max ratio found " + format_weight(result.worst_ratio) + " (~" +
                std::to_string(boost::rational_cast<double>(result.worst_ratio)).substr(0, 6) + ") over " +
                std::to_string(result.evaluated) + " candidates";
  }

  bool all = true;
  for (const Criterion* c : {&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8}) {
    all = all && c->passed();
    std::cout << (c->passed() ? "PASS " : "FAIL ") << c->id << "  " << c->title << "  (checked " << c->checked
              << (c->detail.empty() ? "" : "; " + c->detail) << ")\n";
    for (const auto& f : c->failures) std::cout << "    " << f << "\n";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("%s in %.1fs\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED", seconds);
  return all ? 0 : 1;
}
