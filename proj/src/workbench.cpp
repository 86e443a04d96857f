#include "qsched/workbench.hpp"

#include "qsched/qtrace.hpp"
#include "qsched/report_io.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>

namespace qsched {

std::optional<Weight> competitive_ratio(const Weight& offline, const Weight& online) {
  if (online == 0) return offline == 0 ? std::optional<Weight>(1) : std::nullopt;
  return offline / online;
}

// ---------------------------------------------------------------------------
// Adversarial search

namespace {

class Mutator {
 public:
  Mutator(const GeneratorParams& params, Rng& rng) : params_(params), rng_(rng) {}

  RawTrace fresh() {
    GeneratorParams p = params_;
    p.seed = rng_.next();
    p.n = static_cast<int>(rng_.uniform(1, std::max(1, params_.n)));
    p.buffer_size = static_cast<int>(rng_.uniform(1, params_.buffer_size));
    const Trace t = gen_random(p);
    return {t.buffer_size(), t.packets()};
  }

  RawTrace mutate(RawTrace raw) {
    const int kind = static_cast<int>(rng_.uniform(0, 5));
    auto pick = [&]() -> Packet& {
      return raw.packets[static_cast<std::size_t>(rng_.uniform(0, static_cast<std::int64_t>(raw.packets.size()) - 1))];
    };
    switch (raw.packets.empty() ? 3 : kind) {
      case 0:
        pick().weight = random_weight();
        break;
      case 1: {
        Packet& p = pick();
        p.release = static_cast<Time>(rng_.uniform(1, p.deadline));
        break;
      }
      case 2: {
        Packet& p = pick();
        p.deadline = static_cast<Time>(rng_.uniform(p.release, params_.horizon));
        break;
      }
      case 3:
        if (static_cast<int>(raw.packets.size()) < params_.n) {
          Packet p;
          p.id = next_id(raw);
          p.release = static_cast<Time>(rng_.uniform(1, params_.horizon));
          p.deadline = static_cast<Time>(rng_.uniform(p.release, params_.horizon));
          p.weight = random_weight();
          raw.packets.push_back(p);
        }
        break;
      case 4:
        if (raw.packets.size() > 1) {
          raw.packets.erase(raw.packets.begin() + rng_.uniform(0, static_cast<std::int64_t>(raw.packets.size()) - 1));
        }
        break;
      default:
        raw.buffer_size = rng_.uniform(1, params_.buffer_size);
        break;
    }
    return raw;
  }

 private:
  Weight random_weight() {
    return Weight(rng_.uniform(params_.weight_min, params_.weight_max), params_.weight_denominator);
  }

  static PacketId next_id(const RawTrace& raw) {
    PacketId id = 0;
    for (const Packet& p : raw.packets) id = std::max(id, p.id + 1);
    return id;
  }

  const GeneratorParams& params_;
  Rng& rng_;
};

}  // namespace

SearchResult adversarial_search(const GeneratorParams& params, std::size_t iterations, const OracleLimits& limits) {
  validate_params(params);
  Rng rng(params.seed);
  Mutator mutator(params, rng);
  SearchResult result;
  std::optional<RawTrace> current;
  Weight current_ratio{0};

  for (std::size_t i = 0; i < iterations; ++i) {
    const bool restart = !current || rng.uniform(0, 3) == 0;
    RawTrace candidate = restart ? mutator.fresh() : mutator.mutate(*current);
    Trace trace = make_trace(candidate);
    Weight opt;
    try {
      opt = optimal_bounded(trace, limits).value;
    } catch (const BudgetExceeded&) {
      ++result.skipped;
      continue;
    }
    ++result.evaluated;
    const Weight grq = run_grq(trace).total;
    auto ratio = competitive_ratio(opt, grq);
    if (!ratio || *ratio > 2) {
      ++result.exceedances;
      if (result.exceeding.size() < 8) result.exceeding.push_back(trace);
    }
    const Weight r = ratio.value_or(Weight(1000000));
    if (result.evaluated == 1 || r > result.worst_ratio) {
      result.worst_ratio = r;
      result.worst = trace;
    }
    if (restart ? r > current_ratio || !current : r >= current_ratio) {
      current = std::move(candidate);
      current_ratio = r;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Experiment config

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

void read_range(const nlohmann::json& j, const char* key, int& lo, int& hi) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_number_integer()) {
    lo = hi = v.get<int>();
  } else if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    lo = v[0].get<int>();
    hi = v[1].get<int>();
  } else {
    throw ConfigError(std::string("'") + key + "' must be an integer or [lo, hi]");
  }
  if (hi < lo) throw ConfigError(std::string("'") + key + "' range is empty");
}

template <typename T>
void read_value(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("'") + key + "' has the wrong type");
  }
}

std::set<std::string> read_set(const nlohmann::json& j, const char* key, std::set<std::string> fallback,
                               std::initializer_list<const char*> allowed) {
  if (!j.contains(key)) return fallback;
  std::set<std::string> out;
  if (!j.at(key).is_array()) throw ConfigError(std::string("'") + key + "' must be a list");
  for (const auto& v : j.at(key)) {
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' entries must be strings");
    auto s = v.get<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return s == a; })) {
      throw ConfigError(std::string("'") + key + "': unknown entry '" + s + "'");
    }
    out.insert(s);
  }
  return out;
}

GeneratorSpec parse_generator(const nlohmann::json& j) {
  GeneratorSpec spec;
  std::string kind = "random";
  if (j.is_object()) read_value(j, "kind", kind);
  if (kind == "random") {
    check_keys(j, {"kind", "count", "seed", "n", "B", "horizon", "weight_min", "weight_max", "weight_denominator",
                   "max_span", "burst_slots"},
               "random generator");
    spec.kind = GeneratorSpec::Kind::kRandom;
    RandomFamily& f = spec.family;
    read_value(j, "count", spec.count);
    read_value(j, "seed", f.seed);
    read_range(j, "n", f.n_min, f.n_max);
    read_range(j, "B", f.b_min, f.b_max);
    read_range(j, "horizon", f.horizon_min, f.horizon_max);
    read_value(j, "weight_min", f.weight_min);
    read_value(j, "weight_max", f.weight_max);
    read_value(j, "weight_denominator", f.weight_denominator);
    read_value(j, "max_span", f.max_span);
    read_value(j, "burst_slots", f.burst_slots);
    if (f.n_min < 0 || f.b_min < 1 || f.horizon_min < 1 || f.weight_min < 1 || f.weight_max < f.weight_min ||
        f.weight_denominator < 1) {
      throw ConfigError("random generator: parameters out of range");
    }
  } else if (kind == "killer") {
    check_keys(j, {"kind", "B", "eps"}, "killer generator");
    spec.kind = GeneratorSpec::Kind::kKiller;
    read_value(j, "B", spec.killer_b);
    if (j.contains("eps")) {
      const auto& e = j.at("eps");
      std::optional<Weight> eps;
      if (e.is_string()) eps = parse_weight(e.get<std::string>());
      else if (e.is_number_integer()) eps = Weight(e.get<std::int64_t>());
      if (!eps) throw ConfigError("killer generator: eps must be a rational string like \"1/10\"");
      spec.killer_eps = *eps;
    }
    if (spec.killer_b < 2 || spec.killer_eps <= 0 || spec.killer_eps >= 1) {
      throw ConfigError("killer generator: need B >= 2 and 0 < eps < 1");
    }
  } else if (kind == "file") {
    check_keys(j, {"kind", "path"}, "file generator");
    spec.kind = GeneratorSpec::Kind::kFile;
    std::string path;
    read_value(j, "path", path);
    if (path.empty()) throw ConfigError("file generator: missing 'path'");
    spec.file = path;
  } else {
    throw ConfigError("unknown generator kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  check_keys(j, {"generators", "algorithms", "oracles", "verify", "enumerate_limit", "threads", "counterexample_dir",
                 "max_states", "max_packets"},
             "experiment config");
  ExperimentConfig config;
  if (j.contains("generators")) {
    if (!j.at("generators").is_array()) throw ConfigError("'generators' must be a list");
    for (const auto& g : j.at("generators")) config.generators.push_back(parse_generator(g));
  }
  auto algorithms = read_set(j, "algorithms", {"grq", "greedy"}, {"grq", "greedy"});
  auto oracles = read_set(j, "oracles", {"bounded", "unbounded"}, {"bounded", "unbounded"});
  auto verify = read_set(j, "verify", {"invariants", "charging"}, {"invariants", "charging"});
  config.run_grq = algorithms.count("grq");
  config.run_greedy = algorithms.count("greedy");
  config.bounded_oracle = oracles.count("bounded");
  config.unbounded_oracle = oracles.count("unbounded");
  config.check_invariants = verify.count("invariants");
  config.check_charging = verify.count("charging");
  read_value(j, "enumerate_limit", config.enumerate_limit);
  read_value(j, "threads", config.threads);
  read_value(j, "max_states", config.limits.max_states);
  read_value(j, "max_packets", config.limits.max_packets);
  std::string dir;
  read_value(j, "counterexample_dir", dir);
  config.counterexample_dir = dir;
  if (config.check_charging && !(config.run_grq && config.bounded_oracle)) {
    throw ConfigError("charging verification needs the grq algorithm and the bounded oracle");
  }
  if (config.threads == 0) config.threads = 1;
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(j);
}

// ---------------------------------------------------------------------------
// Evaluation

const char* to_string(RowStatus status) {
  switch (status) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kViolation: return "violation";
    case RowStatus::kBudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

namespace {

void append(std::vector<std::string>& out, const std::string& prefix, const std::vector<std::string>& items) {
  for (const auto& s : items) out.push_back(prefix + s);
}

void append_charging(std::vector<std::string>& out, const std::string& prefix, const ChargeReport& report) {
  for (const CheckResult& c : report.checks) {
    for (const auto& f : c.failures) out.push_back(prefix + c.name + ": " + f);
  }
}

}  // namespace

ExperimentRow evaluate_trace(const Trace& trace, const ExperimentConfig& config) {
  ExperimentRow row;
  row.trace = trace;
  row.digest = trace_digest(trace);
  auto& v = row.violations;
  try {
    std::optional<Transcript> grq;
    std::optional<OfflineSchedule> bounded;
    if (config.run_grq) {
      grq = run_grq(trace);
      row.grq_value = grq->total;
      if (config.check_invariants) {
        append(v, "grq: ", check_grq_transcript(trace, *grq));
        append(v, "slot monotonicity: ", check_slot_monotonicity(*grq));
      }
    }
    if (config.run_greedy) {
      Transcript greedy = run_naive_greedy(trace);
      row.greedy_value = greedy.total;
      if (config.check_invariants) append(v, "greedy: ", check_transcript_partition(trace, greedy));
    }
    if (config.unbounded_oracle) {
      OfflineSchedule s = optimal_unbounded(trace);
      row.unbounded_opt = s.value;
      if (config.check_invariants) {
        // Capacity n never binds, so this checks windows, injectivity and value.
        const Trace roomy = make_trace({std::max<long long>(1, static_cast<long long>(trace.packets().size())), trace.packets()});
        append(v, "unbounded oracle: ", verify_schedule(roomy, s));
      }
    }
    if (config.bounded_oracle) {
      bounded = optimal_bounded(trace, config.limits);
      row.bounded_opt = bounded->value;
      if (config.check_invariants) append(v, "bounded oracle: ", verify_schedule(trace, *bounded));
    }

    if (row.bounded_opt && row.grq_value) {
      row.grq_ratio = competitive_ratio(*row.bounded_opt, *row.grq_value);
      if (!row.grq_ratio || *row.grq_ratio > 2) v.push_back("GRQ ratio exceeds 2");
    }
    if (row.bounded_opt && row.greedy_value) row.greedy_ratio = competitive_ratio(*row.bounded_opt, *row.greedy_value);
    if (config.check_invariants && row.bounded_opt) {
      if (row.unbounded_opt) {
        if (*row.bounded_opt > *row.unbounded_opt) v.push_back("bounded OPT exceeds unbounded OPT");
        if (trace.buffer_size() >= static_cast<int>(trace.packets().size()) && *row.bounded_opt != *row.unbounded_opt) {
          v.push_back("bounded OPT differs from unbounded OPT although B >= n");
        }
      }
      if (row.grq_value && *row.grq_value > *row.bounded_opt) v.push_back("GRQ beats bounded OPT");
      if (row.greedy_value && *row.greedy_value > *row.bounded_opt) v.push_back("greedy beats bounded OPT");
    }

    if (config.check_charging && grq && bounded) {
      append_charging(v, "charging vs OPT: ", check_charging(trace, *grq, *bounded));
      append(v, "rejection timing vs OPT: ", check_rejection_timing(trace, *grq, *bounded));
      ++row.schedules_checked;
      if (config.enumerate_limit > 0) {
        std::size_t k = 0;
        for (const OfflineSchedule& adv : enumerate_feasible(trace, config.enumerate_limit)) {
          const std::string prefix = "charging vs schedule " + std::to_string(k++) + ": ";
          append(v, prefix, verify_schedule(trace, adv));
          append_charging(v, prefix, check_charging(trace, *grq, adv));
          append(v, prefix, check_rejection_timing(trace, *grq, adv));
          ++row.schedules_checked;
        }
      }
    }
  } catch (const BudgetExceeded& e) {
    row.status = RowStatus::kBudgetExceeded;
    v.push_back(e.what());
    return row;
  }
  row.status = v.empty() ? RowStatus::kOk : RowStatus::kViolation;
  return row;
}

namespace {

std::vector<std::pair<std::string, Trace>> materialize(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, Trace>> traces;
  for (std::size_t g = 0; g < config.generators.size(); ++g) {
    const GeneratorSpec& spec = config.generators[g];
    const std::string tag = "g" + std::to_string(g);
    switch (spec.kind) {
      case GeneratorSpec::Kind::kRandom:
        for (std::size_t i = 0; i < spec.count; ++i) {
          traces.emplace_back(tag + ":random#" + std::to_string(i), spec.family.generate(i));
        }
        break;
      case GeneratorSpec::Kind::kKiller:
        traces.emplace_back(tag + ":killer(B=" + std::to_string(spec.killer_b) + ";eps=" +
                                format_weight(spec.killer_eps) + ")",
                            gen_killer(spec.killer_b, spec.killer_eps));
        break;
      case GeneratorSpec::Kind::kFile:
        try {
          traces.emplace_back(tag + ":" + spec.file.string(), read_trace_file(spec.file));
        } catch (const std::exception& e) {
          throw ConfigError(spec.file.string() + ": " + e.what());
        }
        break;
    }
  }
  return traces;
}

}  // namespace

void write_counterexample(const std::filesystem::path& dir, const ExperimentRow& row) {
  std::filesystem::create_directories(dir);
  const std::string stem = "trace_" + std::to_string(row.index) + "_" + row.digest;
  write_trace_file(dir / (stem + ".qtrace"), row.trace);
  nlohmann::json j = {{"source", row.source}, {"violations", row.violations}, {"trace", emit_trace(row.trace)}};
  j["grq"] = to_json(run_grq(row.trace));
  j["greedy"] = to_json(run_naive_greedy(row.trace));
  std::ofstream(dir / (stem + ".json")) << j.dump(2) << "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto traces = materialize(config);
  ExperimentReport report;
  report.rows.resize(traces.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < traces.size(); i = next++) {
      ExperimentRow row = evaluate_trace(traces[i].second, config);
      row.index = i;
      row.source = traces[i].first;
      report.rows[i] = std::move(row);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(traces.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  double ratio_sum = 0;
  std::size_t ratio_count = 0;
  for (const ExperimentRow& row : report.rows) {
    if (row.status == RowStatus::kViolation) ++report.violation_count;
    if (row.status == RowStatus::kBudgetExceeded) ++report.budget_skips;
    if (row.grq_ratio) {
      if (!report.max_grq_ratio || *row.grq_ratio > *report.max_grq_ratio) report.max_grq_ratio = row.grq_ratio;
      ratio_sum += boost::rational_cast<double>(*row.grq_ratio);
      ++ratio_count;
    }
    if (row.greedy_ratio && (!report.max_greedy_ratio || *row.greedy_ratio > *report.max_greedy_ratio)) {
      report.max_greedy_ratio = row.greedy_ratio;
    }
    if (row.status == RowStatus::kViolation && !config.counterexample_dir.empty()) {
      write_counterexample(config.counterexample_dir, row);
    }
  }
  if (ratio_count > 0) report.mean_grq_ratio = ratio_sum / static_cast<double>(ratio_count);
  return report;
}

}  // namespace qsched
