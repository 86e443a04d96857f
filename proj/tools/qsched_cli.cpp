// qsched: command-line workbench for GreedyQueue scheduling experiments.
//
// Exit codes: 0 all checks pass, 1 a violation was found, 2 usage, input or
// configuration error (including an exceeded oracle budget).

#include "qsched/charging.hpp"
#include "qsched/qtrace.hpp"
#include "qsched/report_io.hpp"
#include "qsched/workbench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace qsched;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Output {
  std::string path;
  std::string format = "json";

  void add_to(CLI::App* cmd, bool csv_allowed = true) {
    cmd->add_option("--out", path, "Write output here instead of stdout");
    auto* opt = cmd->add_option("--format", format, "Output format")->capture_default_str();
    opt->check(CLI::IsMember(csv_allowed ? std::vector<std::string>{"json", "csv"} : std::vector<std::string>{"json"}));
  }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
  }

  bool json() const { return format == "json"; }
};

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Weight parse_weight_arg(const std::string& text) {
  auto w = parse_weight(text);
  if (!w) throw CLI::ValidationError("--eps", "expected a rational such as 1/10, got '" + text + "'");
  return *w;
}

void report_violations(const std::vector<std::string>& violations) {
  for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GreedyQueue bounded-buffer scheduling workbench"};
  app.require_subcommand(1);

  // run
  std::string trace_path;
  std::string algo = "grq";
  Output run_out;
  auto* run = app.add_subcommand("run", "Run an online algorithm on a trace and check its transcript");
  run->add_option("--trace", trace_path, "qtrace file")->required();
  run->add_option("--algo", algo, "grq or greedy")->check(CLI::IsMember({"grq", "greedy"}))->capture_default_str();
  run_out.add_to(run);

  // oracle
  std::string mode = "bounded";
  std::size_t max_states = OracleLimits{}.max_states;
  Output oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Exact offline optimum for a trace");
  oracle->add_option("--trace", trace_path, "qtrace file")->required();
  oracle->add_option("--mode", mode, "bounded or unbounded")
      ->check(CLI::IsMember({"bounded", "unbounded"}))
      ->capture_default_str();
  oracle->add_option("--max-states", max_states, "Search budget for the bounded oracle")->capture_default_str();
  oracle_out.add_to(oracle);

  // charge
  std::string adversary = "opt";
  std::size_t limit = 50;
  Output charge_out;
  auto* charge = app.add_subcommand("charge", "Build and verify the charge map against adversary schedules");
  charge->add_option("--trace", trace_path, "qtrace file")->required();
  charge->add_option("--adversary", adversary, "opt (bounded optimum) or enumerate (feasible schedules)")
      ->check(CLI::IsMember({"opt", "enumerate"}))
      ->capture_default_str();
  charge->add_option("--limit", limit, "Schedules to enumerate")->capture_default_str();
  charge->add_option("--max-states", max_states, "Search budget for the bounded oracle")->capture_default_str();
  charge_out.add_to(charge);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a trace");
  gen->require_subcommand(1);
  int killer_b = 3;
  std::string eps_text = "1/10";
  std::string gen_path;
  auto* killer = gen->add_subcommand("killer", "Instance family that defeats naive greedy");
  killer->add_option("--b", killer_b, "Buffer size (>= 2)")->capture_default_str();
  killer->add_option("--eps", eps_text, "Rational in (0, 1)")->capture_default_str();
  killer->add_option("--out", gen_path, "Output qtrace file (default stdout)");

  GeneratorParams params;
  auto add_params = [&](CLI::App* cmd, bool bounds) {
    cmd->add_option("--n", params.n, bounds ? "Max packet count" : "Packet count")->capture_default_str();
    cmd->add_option("--horizon", params.horizon, "Latest release/deadline")->capture_default_str();
    cmd->add_option("--b", params.buffer_size, bounds ? "Max buffer size" : "Buffer size")->capture_default_str();
    cmd->add_option("--weight-min", params.weight_min)->capture_default_str();
    cmd->add_option("--weight-max", params.weight_max)->capture_default_str();
    cmd->add_option("--denominator", params.weight_denominator, "Weights are integers over this")
        ->capture_default_str();
    cmd->add_option("--max-span", params.max_span, "Max deadline - release (-1 unlimited)")->capture_default_str();
    cmd->add_option("--bursts", params.burst_slots, "Number of burst release times (0 = uniform)")
        ->capture_default_str();
    cmd->add_option("--seed", params.seed)->capture_default_str();
  };
  auto* random = gen->add_subcommand("random", "Seeded random trace");
  add_params(random, false);
  random->add_option("--out", gen_path, "Output qtrace file (default stdout)");

  // search
  std::size_t iterations = 10000;
  std::string worst_path;
  Output search_out;
  auto* search = app.add_subcommand("search", "Search for traces maximizing OPT / GRQ");
  add_params(search, true);
  search->add_option("--iters", iterations)->capture_default_str();
  search->add_option("--max-states", max_states, "Search budget for the bounded oracle")->capture_default_str();
  search->add_option("--worst-out", worst_path, "Write the worst trace found as qtrace");
  search_out.add_to(search, false);

  // experiment
  std::string config_path;
  Output experiment_out;
  experiment_out.format = "csv";
  auto* experiment = app.add_subcommand("experiment", "Run a JSON-configured experiment");
  experiment->add_option("--config", config_path, "Experiment config (JSON)")->required();
  experiment_out.add_to(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  OracleLimits limits;
  limits.max_states = max_states;

  try {
    if (*run) {
      const Trace trace = read_trace_file(trace_path);
      const Transcript transcript = algo == "grq" ? run_grq(trace) : run_naive_greedy(trace);
      run_out.write(run_out.json() ? dump(to_json(transcript)) : transcript_csv(transcript));
      std::vector<std::string> violations = check_transcript_partition(trace, transcript);
      if (algo == "grq") {
        violations = check_grq_transcript(trace, transcript);
        for (auto& v : check_slot_monotonicity(transcript)) violations.push_back(v);
      }
      report_violations(violations);
      return violations.empty() ? kOk : kViolation;
    }

    if (*oracle) {
      const Trace trace = read_trace_file(trace_path);
      const OfflineSchedule s = mode == "bounded" ? optimal_bounded(trace, limits) : optimal_unbounded(trace);
      oracle_out.write(oracle_out.json() ? dump(to_json(s)) : schedule_csv(s));
      auto violations = mode == "bounded" ? verify_schedule(trace, s) : std::vector<std::string>{};
      report_violations(violations);
      return violations.empty() ? kOk : kViolation;
    }

    if (*charge) {
      const Trace trace = read_trace_file(trace_path);
      const Transcript grq = run_grq(trace);
      std::vector<OfflineSchedule> schedules;
      if (adversary == "opt") {
        schedules.push_back(optimal_bounded(trace, limits));
      } else {
        schedules = enumerate_feasible(trace, limit);
      }
      bool ok = true;
      nlohmann::json reports = nlohmann::json::array();
      std::string csv;
      for (const OfflineSchedule& adv : schedules) {
        const ChargeReport report = check_charging(trace, grq, adv);
        ok = ok && report.ok();
        nlohmann::json entry = {{"adversary", to_json(adv)}, {"report", to_json(report)}};
        if (report.ok()) entry["charges"] = to_json(assign_f_charges(grq, classify_charges(trace, grq, adv)));
        reports.push_back(entry);
        csv += charge_report_csv(report);
      }
      charge_out.write(charge_out.json()
                           ? dump({{"digest", trace_digest(trace)}, {"ok", ok}, {"reports", reports}})
                           : csv);
      return ok ? kOk : kViolation;
    }

    if (*gen) {
      Trace trace = *killer ? gen_killer(killer_b, parse_weight_arg(eps_text)) : gen_random(params);
      Output out;
      out.path = gen_path;
      out.write(emit_trace(trace));
      return kOk;
    }

    if (*search) {
      const SearchResult result = adversarial_search(params, iterations, limits);
      if (!worst_path.empty()) write_trace_file(worst_path, result.worst);
      search_out.write(dump(to_json(result)));
      return result.exceedances == 0 ? kOk : kViolation;
    }

    if (*experiment) {
      const ExperimentReport report = run_experiment(load_experiment_config(config_path));
      experiment_out.write(experiment_out.json() ? dump(to_json(report)) : experiment_csv(report));
      std::cerr << "rows=" << report.rows.size() << " violations=" << report.violation_count
                << " budget_skips=" << report.budget_skips << " max_ratio="
                << (report.max_grq_ratio ? format_weight(*report.max_grq_ratio) : std::string("n/a")) << "\n";
      return report.ok() ? kOk : kViolation;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
