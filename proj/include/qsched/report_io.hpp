#pragma once

#include "qsched/charging.hpp"
#include "qsched/oracle.hpp"
#include "qsched/workbench.hpp"

#include <string>

#include <nlohmann/json.hpp>

namespace qsched {

// Rationals are written as "num/den" strings everywhere.

nlohmann::json to_json(const Transcript& transcript);
nlohmann::json to_json(const OfflineSchedule& schedule);
nlohmann::json to_json(const ChargeMap& map);
nlohmann::json to_json(const ChargeReport& report);
nlohmann::json to_json(const SearchResult& result);
nlohmann::json to_json(const ExperimentReport& report);

/// time,arrivals,buffer,rejected,sent,sent_weight; ids joined with ';'.
std::string transcript_csv(const Transcript& transcript);
/// id,time,weight
std::string schedule_csv(const OfflineSchedule& schedule);
/// check,passed,failures
std::string charge_report_csv(const ChargeReport& report);
/// One line per row; aggregates are only in the JSON form.
std::string experiment_csv(const ExperimentReport& report);

}  // namespace qsched
