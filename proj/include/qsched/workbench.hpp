#pragma once

#include "qsched/charging.hpp"
#include "qsched/generators.hpp"
#include "qsched/oracle.hpp"
#include "qsched/schedulers.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qsched {

/// offline / online. nullopt when online is 0 and offline is positive
/// (unbounded); 1 when both are 0.
std::optional<Weight> competitive_ratio(const Weight& offline, const Weight& online);

struct SearchResult {
  Trace worst;
  Weight worst_ratio{1};
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // oracle budget exceeded
  std::size_t exceedances = 0;  // candidates with ratio > 2
  std::vector<Trace> exceeding;  // first few of those, for bug reports
};

/// Random restarts mixed with mutations of the current worst trace,
/// maximizing bounded-OPT / GRQ. Candidates stay within params (packet count
/// at most params.n, times within params.horizon, weights in range).
SearchResult adversarial_search(const GeneratorParams& params, std::size_t iterations,
                                const OracleLimits& limits = {});

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorSpec {
  enum class Kind { kRandom, kKiller, kFile };
  Kind kind = Kind::kRandom;
  std::size_t count = 1;
  RandomFamily family;             // kRandom
  int killer_b = 3;                // kKiller
  Weight killer_eps{1, 4};         // kKiller
  std::filesystem::path file;      // kFile
};

struct ExperimentConfig {
  std::vector<GeneratorSpec> generators;
  bool run_grq = true;
  bool run_greedy = true;
  bool bounded_oracle = true;
  bool unbounded_oracle = true;
  bool check_invariants = true;
  bool check_charging = true;
  /// Extra adversary schedules per trace for the charging check (0 = only
  /// the bounded optimum).
  std::size_t enumerate_limit = 0;
  OracleLimits limits;
  unsigned threads = 1;
  std::filesystem::path counterexample_dir;
};

/// JSON config, e.g.
///   {"generators": [{"kind": "random", "count": 100, "seed": 1,
///                    "n": [0, 8], "B": [1, 3], "horizon": [1, 6]},
///                   {"kind": "killer", "B": 10, "eps": "1/10"}],
///    "algorithms": ["grq", "greedy"], "oracles": ["bounded", "unbounded"],
///    "verify": ["invariants", "charging"], "enumerate_limit": 0,
///    "threads": 1, "counterexample_dir": "cex"}
ExperimentConfig parse_experiment_config(const nlohmann::json& json);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

enum class RowStatus { kOk, kViolation, kBudgetExceeded };

const char* to_string(RowStatus status);

struct ExperimentRow {
  std::size_t index = 0;
  std::string source;
  std::string digest;
  Trace trace;
  std::optional<Weight> grq_value;
  std::optional<Weight> greedy_value;
  std::optional<Weight> bounded_opt;
  std::optional<Weight> unbounded_opt;
  std::optional<Weight> grq_ratio;     // bounded OPT / GRQ
  std::optional<Weight> greedy_ratio;  // bounded OPT / greedy
  std::size_t schedules_checked = 0;
  RowStatus status = RowStatus::kOk;
  std::vector<std::string> violations;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::optional<Weight> max_grq_ratio;
  std::optional<Weight> max_greedy_ratio;
  /// Floating-point summary only; per-row ratios stay exact.
  double mean_grq_ratio = 0.0;
  std::size_t violation_count = 0;
  std::size_t budget_skips = 0;

  bool ok() const { return violation_count == 0; }
};

/// Every enabled component on one trace. Never throws for oracle budget
/// overflow; that is recorded as RowStatus::kBudgetExceeded.
ExperimentRow evaluate_trace(const Trace& trace, const ExperimentConfig& config);

/// Writes trace_<index>_<digest>.qtrace and a .json with the violations and
/// both algorithms' transcripts.
void write_counterexample(const std::filesystem::path& dir, const ExperimentRow& row);

/// Rows are in generator order regardless of thread count. Failing traces
/// are dumped to counterexample_dir when it is set.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace qsched
