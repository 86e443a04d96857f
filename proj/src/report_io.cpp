#include "qsched/report_io.hpp"

#include "qsched/qtrace.hpp"

#include <sstream>

namespace qsched {

using nlohmann::json;

namespace {

json weight_or_null(const std::optional<Weight>& w) {
  return w ? json(format_weight(*w)) : json(nullptr);
}

template <typename Range, typename Fn>
std::string join(const Range& range, Fn&& fn) {
  std::string out;
  for (const auto& item : range) {
    if (!out.empty()) out += ';';
    out += fn(item);
  }
  return out;
}

// CSV fields here never contain commas except violation text.
std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json to_json(const Transcript& transcript) {
  json steps = json::array();
  for (const Step& s : transcript.steps) {
    json buffer = json::array();
    for (const auto& slot : s.buffer.slots()) {
      buffer.push_back(slot ? json{{"id", slot->id}, {"weight", format_weight(slot->weight)},
                                   {"deadline", slot->deadline}}
                            : json(nullptr));
    }
    json rejected = json::array();
    for (const Rejection& r : s.rejected) rejected.push_back({{"id", r.id}, {"cause", to_string(r.cause)}});
    steps.push_back({{"time", s.time},
                     {"arrivals", s.arrivals},
                     {"buffer", buffer},
                     {"rejected", rejected},
                     {"sent", s.sent ? json(s.sent->id) : json(nullptr)},
                     {"sent_weight", format_weight(s.sent_weight())}});
  }
  return {{"algorithm", transcript.algorithm},
          {"buffer_size", transcript.buffer_size},
          {"total", format_weight(transcript.total)},
          {"steps", steps}};
}

json to_json(const OfflineSchedule& schedule) {
  json assignment = json::array();
  for (const auto& [id, when] : schedule.assignment) assignment.push_back({{"id", id}, {"time", when}});
  return {{"value", format_weight(schedule.value)}, {"assignment", assignment}};
}

json to_json(const ChargeMap& map) {
  json charges = json::array();
  for (const Charge& c : map.charges) {
    charges.push_back({{"kind", to_string(c.kind)},
                       {"packet", c.packet},
                       {"weight", format_weight(c.weight)},
                       {"source_time", c.source_time},
                       {"target", c.target ? json(*c.target) : json(nullptr)},
                       {"rejection_time", c.rejection_time ? json(*c.rejection_time) : json(nullptr)}});
  }
  return {{"charges", charges}};
}

json to_json(const ChargeReport& report) {
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"failures", c.failures}});
  }
  return {{"ok", report.ok()},
          {"adversary_value", format_weight(report.adversary_value)},
          {"grq_value", format_weight(report.grq_value)},
          {"s_charges", report.s_charges},
          {"d_charges", report.d_charges},
          {"f_charges", report.f_charges},
          {"checks", checks}};
}

json to_json(const SearchResult& result) {
  json exceeding = json::array();
  for (const Trace& t : result.exceeding) exceeding.push_back(emit_trace(t));
  return {{"worst_ratio", format_weight(result.worst_ratio)},
          {"worst_trace", emit_trace(result.worst)},
          {"evaluated", result.evaluated},
          {"skipped", result.skipped},
          {"exceedances", result.exceedances},
          {"exceeding_traces", exceeding}};
}

json to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const ExperimentRow& r : report.rows) {
    rows.push_back({{"index", r.index},
                    {"source", r.source},
                    {"digest", r.digest},
                    {"grq", weight_or_null(r.grq_value)},
                    {"greedy", weight_or_null(r.greedy_value)},
                    {"opt_bounded", weight_or_null(r.bounded_opt)},
                    {"opt_unbounded", weight_or_null(r.unbounded_opt)},
                    {"ratio", weight_or_null(r.grq_ratio)},
                    {"greedy_ratio", weight_or_null(r.greedy_ratio)},
                    {"schedules_checked", r.schedules_checked},
                    {"status", to_string(r.status)},
                    {"violations", r.violations}});
  }
  return {{"rows", rows},
          {"max_ratio", weight_or_null(report.max_grq_ratio)},
          {"max_greedy_ratio", weight_or_null(report.max_greedy_ratio)},
          {"mean_ratio", report.mean_grq_ratio},
          {"violation_count", report.violation_count},
          {"budget_skips", report.budget_skips},
          {"ok", report.ok()}};
}

std::string transcript_csv(const Transcript& transcript) {
  std::ostringstream os;
  os << "time,arrivals,buffer,rejected,sent,sent_weight\n";
  for (const Step& s : transcript.steps) {
    os << s.time << "," << join(s.arrivals, [](PacketId id) { return std::to_string(id); }) << ","
       << join(s.buffer.slots(),
               [](const std::optional<Packet>& p) { return p ? std::to_string(p->id) : std::string("-"); })
       << "," << join(s.rejected, [](const Rejection& r) { return std::to_string(r.id) + ":" + to_string(r.cause); })
       << "," << (s.sent ? std::to_string(s.sent->id) : std::string("idle")) << "," << format_weight(s.sent_weight())
       << "\n";
  }
  return os.str();
}

std::string schedule_csv(const OfflineSchedule& schedule) {
  std::ostringstream os;
  os << "id,time\n";
  for (const auto& [id, when] : schedule.assignment) os << id << "," << when << "\n";
  return os.str();
}

std::string charge_report_csv(const ChargeReport& report) {
  std::ostringstream os;
  os << "check,passed,failures\n";
  for (const CheckResult& c : report.checks) {
    os << c.name << "," << (c.passed ? "pass" : "FAIL") << ","
       << quoted(join(c.failures, [](const std::string& s) { return s; })) << "\n";
  }
  return os.str();
}

std::string experiment_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "index,source,digest,grq,greedy,opt_bounded,opt_unbounded,ratio,greedy_ratio,status,violations\n";
  auto cell = [](const std::optional<Weight>& w) { return w ? format_weight(*w) : std::string(); };
  for (const ExperimentRow& r : report.rows) {
    os << r.index << "," << r.source << "," << r.digest << "," << cell(r.grq_value) << "," << cell(r.greedy_value)
       << "," << cell(r.bounded_opt) << "," << cell(r.unbounded_opt) << "," << cell(r.grq_ratio) << ","
       << cell(r.greedy_ratio) << "," << to_string(r.status) << ","
       << quoted(join(r.violations, [](const std::string& s) { return s; })) << "\n";
  }
  return os.str();
}

}  // namespace qsched
