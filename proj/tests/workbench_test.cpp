#include "qsched/workbench.hpp"

#include "qsched/qtrace.hpp"
#include "qsched/report_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

namespace qsched {
namespace {

constexpr const char* kFrozenSeedOne =
    "# qtrace v1\n"
    "B 2\n"
    "p 0 4 4 1/1\n"
    "p 1 2 2 7/1\n"
    "p 2 4 5 6/1\n"
    "p 3 5 5 6/1\n";

TEST(GenKiller, Shape) {
  const Trace t = gen_killer(3, Weight(1, 4));
  EXPECT_EQ(t.buffer_size(), 3);
  ASSERT_EQ(t.packets().size(), 5u);
  int heavy = 0, light = 0;
  for (const Packet& p : t.packets()) {
    EXPECT_EQ(p.release, 1);
    if (p.weight == 1 && p.deadline == 1) ++heavy;
    if (p.weight == Weight(3, 4) && p.deadline == 3) ++light;
  }
  EXPECT_EQ(heavy, 3);
  EXPECT_EQ(light, 2);
}

TEST(GenKiller, GreedyAndOptimum) {
  struct Case {
    int b;
    Weight eps;
    Weight opt;
  };
  for (const Case& c : {Case{3, Weight(1, 4), Weight(5, 2)}, Case{10, Weight(1, 10), Weight(91, 10)},
                        Case{2, Weight(1, 2), Weight(3, 2)}}) {
    const Trace t = gen_killer(c.b, c.eps);
    EXPECT_EQ(run_naive_greedy(t).total, Weight(1));
    EXPECT_EQ(optimal_bounded(t).value, c.opt);
    EXPECT_EQ(run_grq(t).total, c.opt);
  }
}

TEST(GenKiller, RejectsBadArguments) {
  EXPECT_THROW(gen_killer(1, Weight(1, 2)), std::invalid_argument);
  EXPECT_THROW(gen_killer(3, Weight(0)), std::invalid_argument);
  EXPECT_THROW(gen_killer(3, Weight(1)), std::invalid_argument);
}

TEST(GenRandom, EmptyWhenNIsZero) {
  GeneratorParams p;
  p.n = 0;
  EXPECT_TRUE(gen_random(p).packets().empty());
}

TEST(GenRandom, Deterministic) {
  GeneratorParams p;
  p.seed = 42;
  EXPECT_EQ(emit_trace(gen_random(p)), emit_trace(gen_random(p)));
  GeneratorParams q = p;
  q.seed = 43;
  EXPECT_NE(emit_trace(gen_random(p)), emit_trace(gen_random(q)));
}

TEST(GenRandom, FrozenOutputForSeedOne) {
  // Pins the documented generator so traces reproduce across builds.
  GeneratorParams p;
  p.n = 4;
  p.horizon = 5;
  p.buffer_size = 2;
  p.weight_max = 9;
  p.seed = 1;
  EXPECT_EQ(emit_trace(gen_random(p)), kFrozenSeedOne);
}

TEST(GenRandom, RespectsRanges) {
  GeneratorParams p;
  p.n = 50;
  p.horizon = 7;
  p.max_span = 2;
  p.weight_min = 3;
  p.weight_max = 5;
  p.burst_slots = 2;
  const Trace t = gen_random(p);
  std::set<Time> releases;
  for (const Packet& q : t.packets()) {
    EXPECT_LE(q.deadline, 7);
    EXPECT_LE(q.deadline - q.release, 2);
    EXPECT_GE(q.weight, 3);
    EXPECT_LE(q.weight, 5);
    releases.insert(q.release);
  }
  EXPECT_LE(releases.size(), 2u);
}

TEST(GenRandom, GrqWithinFactorTwoOfOptimum) {
  GeneratorParams p;
  p.n = 8;
  p.horizon = 6;
  p.buffer_size = 2;
  p.weight_max = 16;
  p.seed = 1;
  const Trace t = gen_random(p);
  EXPECT_EQ(t.packets().size(), 8u);
  EXPECT_GE(2 * run_grq(t).total, optimal_bounded(t).value);
}

TEST(GenRandom, InvalidParams) {
  GeneratorParams p;
  p.buffer_size = 0;
  EXPECT_THROW(gen_random(p), std::invalid_argument);
  p = {};
  p.weight_max = 0;
  EXPECT_THROW(gen_random(p), std::invalid_argument);
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto v = rng.uniform(-2, 2);
    EXPECT_GE(v, -2);
    EXPECT_LE(v, 2);
  }
  EXPECT_THROW(rng.uniform(2, 1), std::invalid_argument);
}

TEST(CompetitiveRatio, EdgeCases) {
  EXPECT_EQ(competitive_ratio(Weight(0), Weight(0)), Weight(1));
  EXPECT_FALSE(competitive_ratio(Weight(1), Weight(0)));
  EXPECT_EQ(competitive_ratio(Weight(3), Weight(2)), Weight(3, 2));
}

TEST(AdversarialSearch, RatioNeverExceedsTwo) {
  GeneratorParams p;
  p.n = 6;
  p.horizon = 5;
  p.buffer_size = 3;
  p.seed = 11;
  auto r = adversarial_search(p, 500);
  EXPECT_EQ(r.exceedances, 0u);
  EXPECT_LE(r.worst_ratio, 2);
  EXPECT_GE(r.worst_ratio, 1);
  EXPECT_EQ(r.evaluated + r.skipped, 500u);
  EXPECT_EQ(competitive_ratio(optimal_bounded(r.worst).value, run_grq(r.worst).total), r.worst_ratio);
}

TEST(AdversarialSearch, BufferOneSmallInstances) {
  GeneratorParams p;
  p.n = 6;
  p.horizon = 5;
  p.buffer_size = 1;
  p.seed = 5;
  auto r = adversarial_search(p, 300);
  EXPECT_GE(r.worst_ratio, 1);
  EXPECT_LE(r.worst_ratio, 2);
  EXPECT_EQ(r.worst.buffer_size(), 1);
}

TEST(AdversarialSearch, Deterministic) {
  GeneratorParams p;
  p.seed = 99;
  auto a = adversarial_search(p, 100);
  auto b = adversarial_search(p, 100);
  EXPECT_EQ(a.worst, b.worst);
  EXPECT_EQ(a.worst_ratio, b.worst_ratio);
}

TEST(ExperimentConfig, ParsesAndRejects) {
  auto cfg = parse_experiment_config(nlohmann::json::parse(R"({
    "generators": [{"kind": "random", "count": 4, "seed": 2, "n": [0, 5], "B": [1, 2], "horizon": 4},
                   {"kind": "killer", "B": 10, "eps": "1/10"}],
    "algorithms": ["grq"], "verify": ["invariants"], "threads": 2})"));
  ASSERT_EQ(cfg.generators.size(), 2u);
  EXPECT_EQ(cfg.generators[0].count, 4u);
  EXPECT_EQ(cfg.generators[0].family.n_max, 5);
  EXPECT_EQ(cfg.generators[0].family.horizon_min, 4);
  EXPECT_EQ(cfg.generators[1].killer_eps, Weight(1, 10));
  EXPECT_FALSE(cfg.run_greedy);
  EXPECT_FALSE(cfg.check_charging);
  EXPECT_EQ(cfg.threads, 2u);

  auto bad = [](const char* text) { return parse_experiment_config(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad(R"({"generators": [{"kind": "nope"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"generatorz": []})"), ConfigError);
  EXPECT_THROW(bad(R"({"generators": [{"kind": "killer", "B": 1}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"generators": [{"kind": "random", "n": [5, 2]}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"algorithms": ["greedy"], "verify": ["charging"]})"), ConfigError);
  EXPECT_THROW(bad(R"({"oracles": ["magic"]})"), ConfigError);
}

TEST(RunExperiment, EmptyGeneratorList) {
  auto report = run_experiment(parse_experiment_config(nlohmann::json::parse(R"({"generators": []})")));
  EXPECT_TRUE(report.rows.empty());
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.max_grq_ratio);
}

TEST(RunExperiment, HundredRandomTraces) {
  auto cfg = parse_experiment_config(nlohmann::json::parse(R"({
    "generators": [{"kind": "random", "count": 100, "seed": 1, "n": [0, 8], "B": [1, 3], "horizon": [1, 6]}]})"));
  auto report = run_experiment(cfg);
  ASSERT_EQ(report.rows.size(), 100u);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.budget_skips, 0u);
  for (const auto& row : report.rows) {
    ASSERT_TRUE(row.grq_ratio);
    EXPECT_LE(*row.grq_ratio, 2);
    EXPECT_EQ(row.status, RowStatus::kOk);
  }
  ASSERT_TRUE(report.max_grq_ratio);
  EXPECT_LE(*report.max_grq_ratio, 2);
}

TEST(RunExperiment, GreedyOnKiller) {
  auto cfg = parse_experiment_config(nlohmann::json::parse(R"({
    "generators": [{"kind": "killer", "B": 10, "eps": "1/10"}]})"));
  auto report = run_experiment(cfg);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].greedy_ratio, Weight(91, 10));
  EXPECT_EQ(report.rows[0].grq_ratio, Weight(1));
  EXPECT_EQ(report.max_greedy_ratio, Weight(91, 10));
}

TEST(RunExperiment, ThreadCountDoesNotChangeRows) {
  auto json = nlohmann::json::parse(R"({
    "generators": [{"kind": "random", "count": 40, "seed": 3, "n": [0, 7], "B": [1, 3], "horizon": [1, 6]}],
    "enumerate_limit": 5})");
  auto serial = run_experiment(parse_experiment_config(json));
  json["threads"] = 4;
  auto parallel = run_experiment(parse_experiment_config(json));
  EXPECT_EQ(experiment_csv(serial), experiment_csv(parallel));
  EXPECT_EQ(to_json(serial).dump(), to_json(parallel).dump());
}

TEST(RunExperiment, BudgetOverflowIsCountedNotFatal) {
  auto cfg = parse_experiment_config(nlohmann::json::parse(R"({
    "generators": [{"kind": "random", "count": 3, "seed": 3, "n": 9, "B": 3, "horizon": 6}],
    "max_states": 2})"));
  auto report = run_experiment(cfg);
  EXPECT_EQ(report.budget_skips, 3u);
  EXPECT_EQ(report.rows[0].status, RowStatus::kBudgetExceeded);
}

TEST(WriteCounterexample, WritesTraceAndTranscripts) {
  const auto dir = std::filesystem::temp_directory_path() / "qsched_cex_test";
  std::filesystem::remove_all(dir);
  ExperimentRow row;
  row.index = 7;
  row.trace = gen_killer(3, Weight(1, 4));
  row.digest = trace_digest(row.trace);
  row.violations = {"synthetic"};
  row.status = RowStatus::kViolation;
  write_counterexample(dir, row);
  const auto stem = dir / ("trace_7_" + row.digest);
  EXPECT_EQ(read_trace_file(stem.string() + ".qtrace"), row.trace);
  std::ifstream in(stem.string() + ".json");
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["violations"][0], "synthetic");
  EXPECT_EQ(j["grq"]["total"], "5/2");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qsched
